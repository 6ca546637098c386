#include "itjulia/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "itjulia/error.hpp"

namespace itj {

namespace {

double number_at(const json& j, const std::string& where) {
  if (!j.is_number()) throw InputError("field '" + where + "': expected a number");
  return j.get<double>();
}

json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

cplx coefficient_from_json(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {number_at(j[0], where + "[0]"), number_at(j[1], where + "[1]")};
  throw InputError("field '" + where + "': expected a number or an [re, im] pair");
}

std::vector<Polynomial> polys_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw InputError("field '" + where + "': expected a list of polynomials");
  std::vector<Polynomial> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(polynomial_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

Bounds bounds_from_json(const json& j) {
  if (!j.is_object()) throw InputError("field 'bounds': expected an object with d, K, M");
  Bounds b;
  if (!j.contains("d") || !j["d"].is_number_integer()) throw InputError("field 'bounds.d': expected an integer");
  b.d = j["d"].get<int>();
  if (!j.contains("K")) throw InputError("field 'bounds.K': missing");
  b.K = number_at(j["K"], "bounds.K");
  if (!j.contains("M")) throw InputError("field 'bounds.M': missing");
  b.M = number_at(j["M"], "bounds.M");
  b.validate();
  return b;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_text(const std::string& text, const std::string& path) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // report the line of the failing byte
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream os;
    os << path << ":" << line << ":" << col << ": invalid JSON";
    throw InputError(os.str());
  }
}

}  // namespace

Polynomial polynomial_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw InputError("field '" + where + "': expected a nonempty coefficient list");
  std::vector<cplx> c;
  for (std::size_t i = 0; i < j.size(); ++i) c.push_back(coefficient_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  return Polynomial(std::move(c));
}

json polynomial_to_json(const Polynomial& p) {
  json arr = json::array();
  for (const cplx& c : p.coeffs()) arr.push_back(json::array({c.real(), c.imag()}));
  return arr;
}

SequenceSpec sequence_from_json(const json& j) {
  if (!j.is_object()) throw InputError("sequence description must be a JSON object");
  if (!j.contains("kind") || !j["kind"].is_string()) throw InputError("field 'kind': expected a string");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "builtin-thm72") {
    if (!j.contains("n") || !j["n"].is_number_integer()) throw InputError("field 'n': expected an integer for builtin-thm72");
    return SequenceSpec::counterexample(j["n"].get<int>());
  }
  if (kind == "builtin-thm72-limit") return SequenceSpec::counterexample_limit();
  if (kind != "explicit-prefix-with-periodic-tail") throw InputError("field 'kind': unknown sequence kind '" + kind + "'");
  if (!j.contains("bounds")) throw InputError("field 'bounds': missing");
  const Bounds b = bounds_from_json(j["bounds"]);
  std::vector<Polynomial> prefix;
  if (j.contains("prefix")) prefix = polys_from_json(j["prefix"], "prefix");
  if (!j.contains("tail")) throw InputError("field 'tail': missing");
  std::vector<Polynomial> tail = polys_from_json(j["tail"], "tail");
  if (tail.empty()) throw InputError("field 'tail': must be nonempty");
  return SequenceSpec::periodic(std::move(prefix), std::move(tail), b);
}

json sequence_to_json(const SequenceSpec& seq) {
  json j;
  switch (seq.kind()) {
    case SequenceKind::Counterexample:
      j["kind"] = "builtin-thm72";
      j["n"] = seq.cycles();
      break;
    case SequenceKind::CounterexampleLimit:
      j["kind"] = "builtin-thm72-limit";
      break;
    case SequenceKind::PeriodicTail: {
      j["kind"] = "explicit-prefix-with-periodic-tail";
      json prefix = json::array(), tail = json::array();
      for (const auto& p : seq.prefix()) prefix.push_back(polynomial_to_json(p));
      for (const auto& p : seq.tail()) tail.push_back(polynomial_to_json(p));
      j["prefix"] = prefix;
      j["tail"] = tail;
      break;
    }
  }
  j["bounds"] = {{"d", seq.bounds().d}, {"K", seq.bounds().K}, {"M", seq.bounds().M}};
  return j;
}

json read_json_file(const std::string& path) { return parse_text(slurp(path), path); }

SequenceSpec read_sequence_file(const std::string& path) {
  const json j = read_json_file(path);
  try {
    if (j.is_object() && j.contains("from_sequence")) return sequence_from_json(j["from_sequence"]);
    return sequence_from_json(j);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

PLSpec pl_spec_from_json(const json& j) {
  if (!j.is_object() || !j.contains("from_sequence")) throw InputError("field 'from_sequence': missing");
  PLSpec s{sequence_from_json(j["from_sequence"]), 0.0, 0};
  if (!j.contains("rho")) throw InputError("field 'rho': missing");
  s.rho = number_at(j["rho"], "rho");
  if (!j.contains("horizon") || !j["horizon"].is_number_integer()) throw InputError("field 'horizon': expected an integer");
  s.horizon = j["horizon"].get<int>();
  return s;
}

std::vector<std::uint8_t> pgm_bytes(const JuliaApprox& ja) {
  const int n = ja.k_mask.grid.resolution;
  std::string header = "P5\n" + std::to_string(n) + " " + std::to_string(n) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + ja.k_mask.bits.size());
  const int depth = std::max(ja.depth, 1);
  for (std::size_t i = 0; i < ja.k_mask.bits.size(); ++i) {
    if (ja.k_mask.bits[i]) {
      out.push_back(255);
      continue;
    }
    const int s = i < ja.steps.size() ? std::max(ja.steps[i], 0) : 0;
    const long v = std::lround(255.0 * s / depth);
    out.push_back(static_cast<std::uint8_t>(std::clamp<long>(v, 0, 254)));
  }
  return out;
}

void write_pgm(const std::string& path, const JuliaApprox& ja) {
  const auto bytes = pgm_bytes(ja);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

void write_curve_csv(const std::string& path, const Curve& curve) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << "# closed=" << (curve.closed ? "true" : "false") << "\n";
  out << "re,im\n";
  out.precision(17);
  for (const cplx& p : curve.points) out << p.real() << "," << p.imag() << "\n";
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

json components_to_json(const std::vector<ComponentInfo>& comps) {
  json arr = json::array();
  for (const auto& c : comps) {
    arr.push_back({{"cells", c.cell_count},
                   {"diameter", c.diameter},
                   {"centroid", json::array({c.centroid.real(), c.centroid.imag()})}});
  }
  return arr;
}

json thm72_row_to_json(const Thm72Row& row) {
  return {{"j", row.j},
          {"time_index", row.time_index},
          {"component_count", row.component_count},
          {"max_diameter", row.max_diameter},
          {"min_diameter", row.min_diameter},
          {"min_single_step_derivative_on_J", row.min_single_step_derivative_on_J},
          {"adjacent_gap", finite_or_null(row.adjacent_gap)}};
}

json pl_report_to_json(const PLReport& rep) {
  json brackets = json::array();
  for (const auto& b : rep.critical_brackets) brackets.push_back(json::array({finite_or_null(b.lower), finite_or_null(b.upper)}));
  json containment = json::array();
  for (bool c : rep.containment) containment.push_back(c);
  return {{"PL1", {{"pass", rep.pl1}, {"max_bound", rep.max_bound}, {"u_bounds", rep.u_bounds},
                   {"v_bounds", rep.v_bounds}, {"containment", containment}}},
          {"PL2", {{"pass", rep.pl2}, {"degrees", rep.degrees}, {"basepoint_derivative", rep.basepoint_derivative}}},
          {"PL3", {{"pass", rep.pl3}, {"max_upper", finite_or_null(rep.max_critical_upper)}, {"brackets", brackets}}}};
}

json turning_to_json(const TurningReport& rep) {
  return {{"constant", finite_or_null(rep.constant)},
          {"resolution", rep.resolution},
          {"depth", rep.depth},
          {"n_points", rep.n_points}};
}

json separation_to_json(const SeparationResult& sep) {
  return {{"R", sep.R},
          {"delta", sep.delta},
          {"components", sep.components},
          {"component_gap", sep.component_gap},
          {"circle_samples", sep.circle_samples},
          {"circle_escaped", sep.circle_escaped},
          {"gap_ok", sep.gap_ok}};
}

}  // namespace itj
