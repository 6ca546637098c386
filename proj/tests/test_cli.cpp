#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const fs::path& workdir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("itj_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

fs::path put(const std::string& name, const std::string& text) {
  const fs::path p = workdir() / name;
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run itj(const std::string& args) {
  static int counter = 0;
  const fs::path out = workdir() / ("stdout" + std::to_string(counter));
  const fs::path err = workdir() / ("stderr" + std::to_string(counter++));
  const std::string cmd = std::string(ITJ_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

const std::string kZ2 =
    R"({"kind": "explicit-prefix-with-periodic-tail", "bounds": {"d": 2, "K": 1.0, "M": 0.0}, "tail": [[0, 0, 1]]})";
const std::string kC03 =
    R"({"kind": "explicit-prefix-with-periodic-tail", "bounds": {"d": 2, "K": 1.0, "M": 0.3}, "tail": [[0.3, 0, 1]]})";
const std::string kDust =
    R"({"kind": "explicit-prefix-with-periodic-tail", "bounds": {"d": 2, "K": 1.0, "M": 1.0},
        "tail": [[-1, 0, 1], [[0.1, 0.2], 0, 1]]})";

}  // namespace

TEST_CASE("render writes an image and components") {
  const fs::path seq = put("z2.json", kZ2);
  const fs::path pgm = workdir() / "z2.pgm";
  const Run r = itj("render --seq " + seq.string() + " --time 0 --depth 40 --grid 256 --out " + pgm.string());
  CHECK(r.code == 0);
  const std::string img = slurp(pgm);
  CHECK(img.rfind("P5\n256 256\n255\n", 0) == 0);
  CHECK(img.size() == std::string("P5\n256 256\n255\n").size() + 256 * 256);
  const json comps = json::parse(slurp(pgm.string() + ".components.json"));
  CHECK(comps.dump().find("\"cells\"") != std::string::npos);
}

TEST_CASE("exit codes") {
  const fs::path z2 = put("z2.json", kZ2);
  const fs::path c03 = put("c03.json", kC03);
  const fs::path bad = put("bad.json", "{\n  \"kind\": \"builtin-thm72\",\n  \"n\": 3,\n}\n");
  const fs::path dust = put("dust.json", kDust);

  const Run ok = itj("thm71 --seq " + z2.string() + " --grid 512");
  CHECK(ok.code == 0);
  CHECK(json::parse(ok.out)["passed"] == true);

  const Run refused = itj("thm71 --seq " + c03.string() + " --grid 512");
  CHECK(refused.code == 2);
  CHECK(refused.err.find("hypothesis") != std::string::npos);

  const Run parse = itj("thm71 --seq " + bad.string());
  CHECK(parse.code == 2);
  CHECK(parse.err.find(bad.string() + ":4:") != std::string::npos);

  CHECK(itj("render --seq " + z2.string() + " --grid 100 --out " + (workdir() / "x.pgm").string()).code == 2);
  CHECK(itj("render --seq " + z2.string() + " --depth 0 --out " + (workdir() / "x.pgm").string()).code == 2);
  CHECK(itj("nonsense").code == 2);
  CHECK(itj("plbuild --seq " + z2.string() + " --rho 1 --horizon 8").code == 2);

  const Run failed = itj("invariance --seq " + dust.string() + " --time 0 --depth 60 --grid 512");
  CHECK(failed.code == 1);
  CHECK(failed.err.find("claim failed: ") != std::string::npos);
  CHECK(json::parse(failed.out)["passed"] == false);
}

TEST_CASE("thm72 for a finite sequence") {
  const Run r = itj("thm72 --n 3 --j 3 --grid 1024 --depth 40");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["n"] == 3);
  REQUIRE(j["rows"].size() == 3);
  CHECK(j["rows"][0]["component_count"] == 4);
  CHECK(j["rows"][1]["component_count"] == 8);
  CHECK(j["rows"][2]["component_count"] == 1);
  const Run limit = itj("thm72 --j 3 --grid 1024 --depth 40");
  REQUIRE(limit.code == 0);
  const json l = json::parse(limit.out);
  CHECK(l["n"] == "limit");
  CHECK(l["rows"][2]["component_count"] == 16);
}

TEST_CASE("outputs are deterministic") {
  const fs::path z2 = put("z2.json", kZ2);
  for (const std::string& args : {"invariance --seq " + z2.string() + " --time 0 --grid 256 --seed 7",
                                  std::string("separation --grid 512"), std::string("convergence --grid 512")}) {
    const Run a = itj(args);
    const Run b = itj(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }
  const fs::path o1 = workdir() / "r1.json", o2 = workdir() / "r2.json";
  CHECK(itj("plbuild --seq " + z2.string() + " --rho 4 --horizon 8 --out " + o1.string()).code == 0);
  CHECK(itj("plbuild --seq " + z2.string() + " --rho 4 --horizon 8 --out " + o2.string()).code == 0);
  CHECK(slurp(o1) == slurp(o2));
}
