#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"

using namespace gaussriesz;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "gaussriesz");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

// Data rows of a CSV text: '#' lines and the header dropped.
std::vector<std::vector<double>> rows(const std::string& csv) {
  std::vector<std::vector<double>> out;
  std::istringstream in(csv);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<double> r;
    std::istringstream cells(line);
    std::string c;
    while (std::getline(cells, c, ',')) r.push_back(std::stod(c));
    out.push_back(r);
  }
  return out;
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("gaussriesz-test-" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("transform: old first-order transform of h1 is h0") {
  const Run r = run({"transform", "--family", "old", "--alpha", "1", "--input", "h1"});
  REQUIRE(r.code == cli::kExitPass);
  const auto t = rows(r.out);
  REQUIRE(t.size() == 21);
  for (const auto& row : t) CHECK(row[2] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("transform: new first-order transform of h0 is sqrt(2) x") {
  const Run r = run({"transform", "--family", "new", "--alpha", "1", "--input", "h0", "--nodes", "11"});
  REQUIRE(r.code == cli::kExitPass);
  const auto t = rows(r.out);
  REQUIRE(t.size() == 11);
  for (const auto& row : t) CHECK(row[2] == doctest::Approx(std::sqrt(2.0) * row[0]).epsilon(1e-14));
}

TEST_CASE("transform: kernel column follows the spectral column") {
  const Run r = run({"transform", "--alpha", "1", "--input", "h1 + 0.5*h2", "--nodes", "3", "--range", "1",
                     "--kernel", "true", "--calibration", (scratch("kernel") / "none.txt").string()});
  REQUIRE(r.code == cli::kExitPass);
  for (const auto& row : rows(r.out)) CHECK(row[3] == doctest::Approx(row[2]).epsilon(1e-3));
}

TEST_CASE("usage errors exit with 64") {
  CHECK(run({"transform", "--family", "old", "--input", "h1"}).code == cli::kExitUsage);
  CHECK(run({"transform", "--alpha", "1"}).code == cli::kExitUsage);
  CHECK(run({"transform", "--alpha", "1", "--input", "h1", "--family", "newer"}).code == cli::kExitUsage);
  CHECK(run({"transform", "--alpha", "1,0", "--n", "1", "--input", "h1"}).code == cli::kExitUsage);
  CHECK(run({"transform", "--alpha", "1", "--input", "h90"}).code == cli::kExitUsage);
  CHECK(run({"verify", "everything"}).code == cli::kExitUsage);
  CHECK(run({"verify"}).code == cli::kExitUsage);
  CHECK(run({}).code == cli::kExitUsage);
  CHECK(run({"transform", "--bogus", "1"}).code == cli::kExitUsage);
}

TEST_CASE("config file: flags override, errors name the line") {
  const auto dir = scratch("config");
  const auto cfg = dir / "run.cfg";
  std::ofstream(cfg) << "# transform settings\nfamily = new\nalpha = 1\ninput = h0\n\nnodes = 5\n";
  Run r = run({"transform", "--config", cfg.string()});
  REQUIRE(r.code == cli::kExitPass);
  auto t = rows(r.out);
  REQUIRE(t.size() == 5);
  CHECK(t[0][2] == doctest::Approx(std::sqrt(2.0) * t[0][0]));

  r = run({"transform", "--config", cfg.string(), "--family", "old", "--input", "h1"});
  REQUIRE(r.code == cli::kExitPass);
  t = rows(r.out);
  CHECK(t[0][2] == doctest::Approx(1.0));

  std::ofstream(cfg) << "alpha = 1\ninput = h1\nnodez = 5\n";
  r = run({"transform", "--config", cfg.string()});
  CHECK(r.code == cli::kExitUsage);
  CHECK(r.err.find("run.cfg:3") != std::string::npos);

  std::ofstream(cfg) << "alpha = 1\ninput = h1\nnodes = many\n";
  r = run({"transform", "--config", cfg.string()});
  CHECK(r.code == cli::kExitUsage);
  CHECK(r.err.find("run.cfg:3") != std::string::npos);
}

TEST_CASE("input parsing") {
  const HermiteCoeffs f = cli::parse_input("h1:0 + 0.5*h0:2 + h1:0", 2);
  CHECK(f(MultiIndex{1, 0}) == 2.0);
  CHECK(f(MultiIndex{0, 2}) == 0.5);
  CHECK_THROWS(cli::parse_input("h1", 2));
  CHECK_THROWS(cli::parse_input("x1", 1));
  CHECK_THROWS(cli::parse_input("", 1));
}

TEST_CASE("verify geometry writes a CSV and a JSON summary") {
  const auto dir = scratch("verify");
  const Run r = run({"verify", "geometry", "--samples", "2000", "--n", "2", "--out", dir.string()});
  CHECK(r.code == cli::kExitPass);
  CHECK(r.out.find("\"passed\": true") != std::string::npos);
  CHECK(std::filesystem::exists(dir / "geometry.csv"));
  CHECK(std::filesystem::exists(dir / "summary-geometry.json"));
}

TEST_CASE("verify halfpower reports the slope failure with exit 1") {
  const Run r = run({"verify", "halfpower", "--k", "1"});
  CHECK(r.code == cli::kExitAssertion);
  CHECK(r.out.find("k1_slope") != std::string::npos);
}

TEST_CASE("calibrate: residual, idempotence, and the flagged path") {
  const auto dir = scratch("calibrate");
  const std::string table = (dir / "calibration.txt").string();
  Run r = run({"calibrate", "--family", "old", "--alpha", "1", "--calibration", table});
  REQUIRE(r.code == cli::kExitPass);
  CHECK(nlohmann::json::parse(r.out)["residual"].get<double>() < 1e-4);
  std::ifstream in(table);
  std::stringstream first;
  first << in.rdbuf();
  r = run({"calibrate", "--family", "old", "--alpha", "1", "--calibration", table});
  REQUIRE(r.code == cli::kExitPass);
  std::ifstream in2(table);
  std::stringstream second;
  second << in2.rdbuf();
  CHECK(first.str() == second.str());

  r = run({"calibrate", "--family", "old", "--alpha", "2", "--nodes", "2", "--calibration", table});
  CHECK(r.code == cli::kExitCalibration);
  CHECK(r.out.find("\"flagged\": true") != std::string::npos);
}
