// End-to-end checks of the command-line tool: exit-code contract, artifact
// schemas, determinism, and config round-tripping. Each case shells out to
// the real binary.

#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kBin = GEOMFLOW_BIN;

int run(const std::string& args) {
  const int status = std::system((kBin + " " + args + " >/dev/null 2>&1").c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json load_json(const fs::path& p) { return json::parse(slurp(p)); }

fs::path scratch(const std::string& leaf) {
  const fs::path dir = fs::temp_directory_path() / "geomflow_cli_tests" / leaf;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("cli: usage errors exit with code 2") {
  REQUIRE(run("") == 2);
  REQUIRE(run("frobnicate") == 2);
  REQUIRE(run("verify --shape circle:1") == 2);  // no theorem/suite
  REQUIRE(run("verify --theorem nosuch --shape circle:1") == 2);
  REQUIRE(run("flow --space sphere --flow hyp-mean --shape sphere:1") == 2);
  REQUIRE(run("flow --space euclidean --K 1 --flow curve-lp "
              "--shape circle:1") == 2);  // --space and --K disagree
}

TEST_CASE("cli: hypothesis violations exit with code 3") {
  // A non-convex curve breaks the verifier precondition, not the usage.
  REQUIRE(run("verify --theorem minkowski2d --shape fourier:1:0:0:0:0.3") == 3);
  REQUIRE(run("eigen --shape fourier:1:0:0:0:0.3") == 3);
}

TEST_CASE("cli: verify artifacts and config round-trip") {
  const auto dir = scratch("verify");
  REQUIRE(run("verify --theorem minkowski2d --shape circle:2 "
              "--weight monomial:1 --out " + dir.string()) == 0);

  const json reports = load_json(dir / "reports.json");
  REQUIRE(reports.at("version").get<std::string>() == "0.1.0");
  REQUIRE(reports.at("reports").size() == 1);
  const json& r = reports.at("reports")[0];
  REQUIRE(r.at("theorem") == "minkowski2d");
  REQUIRE(r.at("verdict") == "equality");
  REQUIRE(r.at("tol").get<double>() == 1e-6);
  REQUIRE(r.at("shape_digest").get<std::string>().size() == 16);

  // Replaying the emitted config reproduces the artifact byte for byte.
  const auto dir2 = scratch("verify-replay");
  REQUIRE(run("verify --config " + (dir / "config.json").string() + " --out " +
              dir2.string()) == 0);
  REQUIRE(slurp(dir / "reports.json") == slurp(dir2 / "reports.json"));

  // The config digest identifies the computation, not the output directory.
  REQUIRE(reports.at("config_digest") ==
          load_json(dir2 / "reports.json").at("config_digest"));
}

TEST_CASE("cli: weighted preset suite on a flat ellipse") {
  const auto dir = scratch("suite");
  REQUIRE(run("verify --suite weighted-iso --shape ellipse:2:1 --out " +
              dir.string()) == 0);
  const json reports = load_json(dir / "reports.json");
  REQUIRE(reports.at("reports").size() == 7);
  for (const auto& r : reports.at("reports")) {
    REQUIRE(r.at("verdict") == "holds");
    REQUIRE(r.at("theorem") == "weighted-iso");
  }
}

TEST_CASE("cli: flow artifacts") {
  const auto dir = scratch("flow");
  REQUIRE(run("flow --flow curve-lp --shape fourier:1:0:0:0.08 --samples 96 "
              "--steps 300 --out " + dir.string()) == 0);

  std::istringstream csv(slurp(dir / "monitors.csv"));
  std::string header;
  std::getline(csv, header);
  REQUIRE(header == "step,t,maxF,length,area,weighted2d,isoperimetric2d");
  int rows = 0;
  for (std::string line; std::getline(csv, line);) ++rows;
  REQUIRE(rows >= 2);

  const json verdicts = load_json(dir / "verdicts.json");
  REQUIRE(verdicts.at("pass").get<bool>());
  REQUIRE(verdicts.at("drift_tol").get<double>() == 1e-7);
  REQUIRE(verdicts.at("monitors").size() == 4);
  for (const auto& m : verdicts.at("monitors")) {
    REQUIRE(m.contains("monitor"));
    REQUIRE(m.contains("claim"));
    REQUIRE(m.contains("max_violation"));
    REQUIRE(m.at("pass").get<bool>());
  }

  const json shape = load_json(dir / "final_shape.json");
  REQUIRE(shape.at("K").get<int>() == 0);
  REQUIRE(shape.at("dim").get<int>() == 2);
  REQUIRE(shape.at("rho").size() == 96);
}

TEST_CASE("cli: eigen artifacts and determinism") {
  const auto d1 = scratch("eigen1");
  const auto d2 = scratch("eigen2");
  for (const auto& d : {d1, d2})
    REQUIRE(run("eigen --shape circle:2 --out " + d.string()) == 0);

  const json rep = load_json(d1 / "report.json");
  REQUIRE(rep.at("lambda1").get<double>() == Catch::Approx(0.5).margin(1e-4));
  REQUIRE(rep.at("bound").get<double>() == Catch::Approx(0.5).margin(1e-9));
  REQUIRE(rep.at("tolerance").get<double>() == 1e-4);
  REQUIRE(rep.at("report").at("verdict") == "equality");

  std::istringstream csv(slurp(d1 / "spectrum.csv"));
  std::string header;
  std::getline(csv, header);
  REQUIRE(header == "index,mode,lambda,residual");
  int rows = 0;
  for (std::string line; std::getline(csv, line);) ++rows;
  REQUIRE(rows == 4);

  REQUIRE(slurp(d1 / "spectrum.csv") == slurp(d2 / "spectrum.csv"));
  REQUIRE(slurp(d1 / "report.json") == slurp(d2 / "report.json"));
}

TEST_CASE("cli: sweep is deterministic across worker counts") {
  const auto d1 = scratch("sweep1");
  const auto d2 = scratch("sweep2");
  const std::string args =
      "sweep --theorem minkowski2d --count 4 --amp 0.15 --seed 7 "
      "--samples 192 --out ";
  REQUIRE(run(args + d1.string()) == 0);
  const int status = std::system(("GEOMFLOW_WORKERS=3 " + kBin + " " + args +
                                  d2.string() + " >/dev/null 2>&1").c_str());
  REQUIRE(WIFEXITED(status));
  REQUIRE(WEXITSTATUS(status) == 0);

  REQUIRE(slurp(d1 / "sweep.csv") == slurp(d2 / "sweep.csv"));
  const json summary = load_json(d1 / "summary.json");
  REQUIRE(summary.at("pass").get<int>() == 4);
  REQUIRE(summary.at("violated").get<int>() == 0);
  REQUIRE(summary.at("errors").get<int>() == 0);
}
