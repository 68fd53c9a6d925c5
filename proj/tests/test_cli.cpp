#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>

#include "synseg/cli.hpp"

namespace fs = std::filesystem;
using synseg::dispatch;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("synseg_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

// The single run directory below root whose name starts with prefix.
fs::path only_run(const fs::path& root, const std::string& prefix) {
  fs::path found;
  int n = 0;
  for (const auto& e : fs::directory_iterator(root))
    if (e.path().filename().string().rfind(prefix, 0) == 0) {
      found = e.path();
      ++n;
    }
  REQUIRE(n == 1);
  return found;
}

const std::string src = SYNSEG_SOURCE_DIR;

}  // namespace

TEST_CASE("ground-state writes a profile and reruns identically") {
  const auto root = scratch("gs");
  REQUIRE(dispatch({"synseg", "--out", root.string(), "ground-state", "--dim", "3", "--tol", "1e-10"}) == 0);
  const auto dir = only_run(root, "ground-state-");
  for (const char* f : {"profile.csv", "profile.json", "summary.json", "manifest.json"})
    CHECK(fs::exists(dir / f));
  const auto summary = read_json(dir / "summary.json");
  CHECK(summary["w0"].get<double>() == doctest::Approx(4.33738767997698).epsilon(1e-8));
  const auto man = read_json(dir / "manifest.json");
  CHECK(man["subcommand"] == "ground-state");
  const std::string first = slurp(dir / "profile.csv");
  REQUIRE(dispatch({"synseg", "--out", root.string(), "ground-state", "--dim", "3", "--tol", "1e-10"}) == 0);
  CHECK(only_run(root, "ground-state-") == dir);
  CHECK(slurp(dir / "profile.csv") == first);
}

TEST_CASE("constants reports the single-peak energy") {
  const auto root = scratch("const");
  REQUIRE(dispatch({"synseg", "--out", root.string(), "constants"}) == 0);
  const auto j = read_json(only_run(root, "constants-") / "constants.json");
  CHECK(j.dump().find("44.0") != std::string::npos);
}

TEST_CASE("landscape finds interior extrema for the shipped configs") {
  const auto root = scratch("land");
  REQUIRE(dispatch({"synseg", "--out", root.string(), "landscape", "--ell", "200", "--mode", "max",
                    "--config", src + "/configs/hm_ii.conf"}) == 0);
  const auto dir = only_run(root, "landscape-");
  CHECK(fs::exists(dir / "landscape.csv"));
  const auto j = read_json(dir / "extremum.json");
  CHECK(j["interior"].get<bool>());

  const auto root2 = scratch("land_min");
  REQUIRE(dispatch({"synseg", "--out", root2.string(), "landscape", "--ell", "100", "--mode", "min",
                    "--config", src + "/configs/htilde_iv.conf"}) == 0);
  CHECK(read_json(only_run(root2, "landscape-") / "extremum.json")["interior"].get<bool>());
}

TEST_CASE("usage errors exit with 2") {
  const auto root = scratch("usage");
  CHECK(dispatch({"synseg", "--out", root.string()}) == 2);
  CHECK(dispatch({"synseg", "--out", root.string(), "landscape"}) == 2);
  CHECK(dispatch({"synseg", "--out", root.string(), "landscape", "--ell", "10", "--mode", "sideways"}) == 2);
  CHECK(dispatch({"synseg", "--out", root.string(), "ground-state", "--dim", "4"}) == 2);
  CHECK(dispatch({"synseg", "--out", root.string(), "constants", "--config", "/nonexistent.conf"}) == 2);
  const auto bad = root / "bad.conf";
  std::ofstream(bad) << "[mu]\nmu1 = banana\n";
  CHECK(dispatch({"synseg", "--out", root.string(), "constants", "--config", bad.string()}) == 2);
}

TEST_CASE("numeric failures exit with 1 and leave error.json") {
  const auto root = scratch("numeric");
  CHECK(dispatch({"synseg", "--out", root.string(), "ground-state", "--dim", "3", "--power", "5.5",
                  "--tol", "1e-3", "--r-max", "5"}) == 1);
  const auto dir = only_run(root, "ground-state-");
  const auto err = read_json(dir / "error.json");
  CHECK(err.contains("reason"));
  CHECK(err.contains("message"));
  CHECK(fs::exists(dir / "manifest.json"));

  CHECK(dispatch({"synseg", "--out", root.string(), "construct", "--r", "3", "--rho", "3"}) == 1);
  CHECK(read_json(only_run(root, "construct-") / "error.json")["reason"] == "OutOfDomain");
}

TEST_CASE("construct then verify on a coarse grid") {
  const auto root = scratch("construct");
  const auto conf = root / "coarse.conf";
  std::ofstream(conf) << "[ring]\nell = 3\ngap = 16\n[grid]\nh = 0.25\nmargin = 8\norder = 4\n";
  REQUIRE(dispatch({"synseg", "--out", root.string(), "construct", "--config", conf.string()}) == 0);
  const auto dir = only_run(root, "construct-");
  const auto rep = read_json(dir / "report.json");
  CHECK(rep["converged"].get<bool>());
  CHECK(fs::exists(dir / "solution.bin"));

  REQUIRE(dispatch({"synseg", "--out", root.string(), "verify", "--field", (dir / "solution").string(),
                    "--config", conf.string()}) == 0);
  const auto v = read_json(only_run(root, "verify-") / "verify.json");
  CHECK(v["sync_defect"].get<double>() < 1e-8);
  CHECK(v["rotation_defect"].get<double>() < 1e-12);
  for (const auto& m : v["min"]) CHECK(m.get<double>() > -1e-10);
}
