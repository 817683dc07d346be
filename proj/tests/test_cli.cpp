#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "perpetua/cli.hpp"

using namespace perpetua;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream file(path);
  std::stringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

nlohmann::json load_results(const std::string& dir) {
  return nlohmann::json::parse(slurp(fs::path(dir) / "results.json"));
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
};

}  // namespace

TEST_CASE("radial test subcommand emits an explosive verdict") {
  TempDir dir("perpetua_cli_radial");
  const int code = run_cli({"test", "radial", "--p", "3", "--x0norm", "1",
                            "--out", dir.str()});
  CHECK(code == 0);
  const nlohmann::json results = load_results(dir.str());
  CHECK(results["schema"] == 1);
  CHECK(results["results"]["outcome"] == "explosive");
  CHECK(fs::exists(dir.path / "config.json"));
}

TEST_CASE("unknown models exit with an error") {
  TempDir dir("perpetua_cli_unknown");
  const int code =
      run_cli({"simulate", "--model", "nope", "--out", dir.str()});
  CHECK(code == 1);
}

TEST_CASE("undetermined nested integrals exit with code two") {
  TempDir dir("perpetua_cli_kh");
  // alpha = 2.5, beta = 2 decays exactly at sqrt(1/2) per interval, which
  // sits above the default decay threshold
  const int code = run_cli({"test", "khasminskii", "--alpha", "2.5", "--beta",
                            "2", "--out", dir.str()});
  CHECK(code == 2);
  const int decided = run_cli({"test", "khasminskii", "--alpha", "3",
                               "--beta", "2", "--out", dir.str()});
  CHECK(decided == 0);
}

TEST_CASE("repeated runs are identical apart from the meta block") {
  TempDir dir_a("perpetua_cli_det_a");
  TempDir dir_b("perpetua_cli_det_b");
  const std::vector<std::string> base{"simulate", "--model",   "bm1",
                                      "-n",       "120",       "--horizon",
                                      "2",        "--seed",    "9"};
  std::vector<std::string> run_a = base;
  run_a.insert(run_a.end(), {"--out", dir_a.str()});
  std::vector<std::string> run_b = base;
  run_b.insert(run_b.end(), {"--out", dir_b.str()});
  REQUIRE(run_cli(run_a) == 0);
  REQUIRE(run_cli(run_b) == 0);

  nlohmann::json a = load_results(dir_a.str());
  nlohmann::json b = load_results(dir_b.str());
  a.erase("meta");
  b.erase("meta");
  CHECK(a.dump() == b.dump());
  CHECK(slurp(dir_a.path / "samples.csv") == slurp(dir_b.path / "samples.csv"));
}

TEST_CASE("market subcommand writes the mean ladder") {
  TempDir dir("perpetua_cli_market");
  const int code = run_cli({"market", "--vol", "unit", "-n", "1000",
                            "--horizon", "30", "--ladder", "1,5,30", "--out",
                            dir.str()});
  CHECK(code == 0);
  CHECK(fs::exists(dir.path / "ladder.csv"));
  const nlohmann::json results = load_results(dir.str());
  CHECK(results["results"]["one_dim_martingale"] == "martingale");
  CHECK(results["results"]["verdict"]["outcome"] == "singular");
}

TEST_CASE("verify-timechange with the identity clock reports zero distance") {
  TempDir dir("perpetua_cli_verify");
  const int code = run_cli({"verify-timechange", "--model", "quartic3",
                            "--f", "one", "-n", "250", "--horizon", "30",
                            "--out", dir.str()});
  CHECK(code == 0);
  const nlohmann::json results = load_results(dir.str());
  CHECK(results["results"]["d_statistic"].get<double>() == 0.0);
  CHECK(fs::exists(dir.path / "samples.csv"));
}

TEST_CASE("counterexample subcommand verifies the three claims") {
  TempDir dir("perpetua_cli_counter");
  const int code = run_cli({"counterexample", "--rho", "linear", "--balls",
                            "4", "-n", "150", "--probe", "2000", "--horizon",
                            "30", "--out", dir.str()});
  CHECK(code == 0);
  const nlohmann::json results = load_results(dir.str());
  CHECK(results["results"]["pointwise_bound_failures"] == 0);
  CHECK(results["results"]["partial_sums_monotone"] == true);
}

TEST_CASE("quick acceptance smoke run exits cleanly") {
  TempDir dir("perpetua_cli_accept");
  const int code =
      run_cli({"accept", "--quick", "--seed", "1", "--out", dir.str()});
  CHECK(code == 0);
  const nlohmann::json results = load_results(dir.str());
  CHECK(results["results"]["all_passed"] == true);
  CHECK(results["results"]["criteria"].size() == 9);
}
