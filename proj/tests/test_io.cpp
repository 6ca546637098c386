#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "itjulia/error.hpp"
#include "itjulia/io.hpp"

using namespace itj;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("itj_io_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir / name;
}

void put(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string error_of(const json& j) {
  try {
    sequence_from_json(j);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("sequence JSON round trip") {
  const SequenceSpec periodic = SequenceSpec::periodic(
      {Polynomial({cplx{0.1, -0.2}, 0.0, 1.0})},
      {Polynomial::quadratic(1.0, 0.0, 0.2), Polynomial::quadratic(1.0, 0.0, cplx{-0.1, 0.05})}, Bounds{2, 1.0, 0.25});
  for (const SequenceSpec& s : {periodic, counterexample_seq(3), counterexample_seq(std::nullopt)}) {
    const json j = sequence_to_json(s);
    const SequenceSpec back = sequence_from_json(json::parse(j.dump()));
    CHECK(back.kind() == s.kind());
    CHECK(back.bounds() == s.bounds());
    for (long m = 1; m <= 40; ++m) CHECK(back.term(m) == s.term(m));
    CHECK(sequence_to_json(back) == j);
  }
}

TEST_CASE("coefficients accept numbers and pairs") {
  const json j = json::parse(R"({"kind": "explicit-prefix-with-periodic-tail",
    "bounds": {"d": 2, "K": 1, "M": 0.5},
    "prefix": [], "tail": [[[0.1, 0.2], 0, 1]]})");
  const SequenceSpec s = sequence_from_json(j);
  CHECK(s.term(1)(0.0) == cplx{0.1, 0.2});
  CHECK(s.term(5) == s.term(1));
}

TEST_CASE("field diagnostics") {
  const json base = json::parse(R"({"kind": "explicit-prefix-with-periodic-tail",
    "bounds": {"d": 2, "K": 1, "M": 0.5}, "prefix": [], "tail": [[0, 0, 1]]})");
  json bad = base;
  bad["tail"][0][2] = "one";
  CHECK(error_of(bad).find("field 'tail[0][2]'") != std::string::npos);
  bad = base;
  bad.erase("tail");
  CHECK(error_of(bad).find("field 'tail'") != std::string::npos);
  bad = base;
  bad["kind"] = "spiral";
  CHECK(error_of(bad).find("unknown sequence kind 'spiral'") != std::string::npos);
  bad = base;
  bad["bounds"]["d"] = 2.5;
  CHECK(error_of(bad).find("field 'bounds.d'") != std::string::npos);
  CHECK(error_of(json::parse(R"({"kind": "builtin-thm72"})")).find("field 'n'") != std::string::npos);
  CHECK(error_of(json::array()).find("JSON object") != std::string::npos);
}

TEST_CASE("parse errors name the line") {
  const fs::path p = scratch("broken.json");
  put(p, "{\n  \"kind\": \"builtin-thm72\",\n  \"n\": 3,\n}\n");
  try {
    read_sequence_file(p.string());
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find(p.string() + ":4:") != std::string::npos);
  }
  CHECK_THROWS_AS(read_sequence_file((p.parent_path() / "missing.json").string()), InputError);
}

TEST_CASE("sequence files and wrappers") {
  const fs::path p = scratch("wrapped.json");
  put(p, R"({"from_sequence": {"kind": "builtin-thm72", "n": 2}, "rho": 8, "horizon": 12})");
  CHECK(read_sequence_file(p.string()).kind() == SequenceKind::Counterexample);
  const PLSpec spec = pl_spec_from_json(read_json_file(p.string()));
  CHECK(spec.rho == 8.0);
  CHECK(spec.horizon == 12);
  CHECK_THROWS_AS(pl_spec_from_json(json::parse(R"({"from_sequence": {"kind": "builtin-thm72-limit"}})")),
                  InputError);
}

TEST_CASE("PGM bytes") {
  const SequenceSpec z2 = SequenceSpec::constant(Polynomial::monomial(2), Bounds{2, 1.0, 0.0});
  const JuliaApprox ja = filled_julia(z2, 0, chart_for_radius(2.0, 128), 20);
  const auto bytes = pgm_bytes(ja);
  const std::string header = "P5\n128 128\n255\n";
  REQUIRE(bytes.size() == header.size() + 128 * 128);
  CHECK(std::string(bytes.begin(), bytes.begin() + static_cast<long>(header.size())) == header);
  for (std::size_t i = 0; i < ja.k_mask.bits.size(); ++i) {
    const int v = bytes[header.size() + i];
    if (ja.k_mask.bits[i]) {
      CHECK(v == 255);
    } else {
      CHECK(v == std::min(254L, std::lround(255.0 * ja.steps[i] / 20)));
    }
  }
  const fs::path p = scratch("z2.pgm");
  write_pgm(p.string(), ja);
  CHECK(slurp(p) == std::string(bytes.begin(), bytes.end()));
}

TEST_CASE("curve CSV") {
  Curve c;
  c.closed = true;
  c.points = {cplx{1.0, 0.0}, cplx{0.0, 1.0}, cplx{-1.0, -0.5}};
  const fs::path p = scratch("curve.csv");
  write_curve_csv(p.string(), c);
  std::istringstream in(slurp(p));
  std::string line;
  std::getline(in, line);
  CHECK(line == "# closed=true");
  std::getline(in, line);
  CHECK(line == "re,im");
  std::vector<cplx> back;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    back.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
  }
  CHECK(back == c.points);
}

TEST_CASE("report JSON") {
  const json r = thm72_row_to_json(Thm72Row{2, 5, 8, 0.4, 0.2, 2.1, std::nan("")});
  CHECK(r["component_count"] == 8);
  CHECK(r["time_index"] == 5);
  CHECK(r["adjacent_gap"].is_null());
  const json t = turning_to_json(TurningReport{1.25, 512, 40, 256});
  CHECK(t["constant"] == 1.25);
  CHECK(t["n_points"] == 256);
  const fs::path p = scratch("report.json");
  write_json(p.string(), t);
  CHECK(json::parse(slurp(p)) == t);
  CHECK(slurp(p) == t.dump(2) + "\n");
}
