#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "scales_cli/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "scales");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  // Relative input paths in the configs are resolved against the data dir.
  const auto cwd = fs::current_path();
  fs::current_path(SCALES_TEST_DATA);
  Run r;
  r.code = scales::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  fs::current_path(cwd);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void check_golden(const std::string& name, const std::vector<std::string>& args, int code = 0) {
  const Run r = run_cli(args);
  INFO(name << ": " << r.err);
  REQUIRE(r.code == code);
  const fs::path golden = fs::path(SCALES_GOLDEN_DIR) / (name + ".json");
  if (std::getenv("SCALES_UPDATE_GOLDEN")) {
    std::ofstream(golden, std::ios::binary) << r.out;
    return;
  }
  REQUIRE(fs::exists(golden));
  CHECK(r.out == read_file(golden));
}

}  // namespace

TEST_CASE("golden outputs") {
  check_golden("cover", {"cover", "--input", "line5.csv", "--eps", "1.1"});
  check_golden("pack", {"pack", "--input", "line5.csv", "--eps", "1.1", "--method", "greedy"});
  check_golden("quantize", {"quantize", "--input", "weighted_line.csv", "--eps", "1.2,0.5,0.1"});
  check_golden("local", {"local", "--cube", "n=256", "seed=3", "--grid", "0.25:0.015625:0.5",
                         "--point", "10", "--cross-check"});
  check_golden("report", {"report", "--cube", "n=128", "seed=1", "--grid", "0.25:0.03125:0.5",
                          "--restarts", "2"});
  check_golden("product", {"product", "--product", "cards=2", "depth=6", "--scaling", "2,1",
                           "--verify"});
  check_golden("inhomogeneous", {"inhomogeneous", "--inhomogeneous", "alpha=2", "beta=1",
                                 "n_max=729"});
  check_golden("lipschitz-order", {"lipschitz-order", "--grid", "0.125:0.0078125:0.5"});
  check_golden("embed-check", {"embed-check", "--depth", "2", "--pairs", "4", "--grid-step",
                               "0.0009765625", "--seed", "3"});
  check_golden("wiener-smallball", {"wiener-smallball", "--m", "64", "--paths", "2000",
                                    "--eps", "0.5,0.7"});
  check_golden("wiener-order", {"wiener-order", "--source", "mc", "--m", "64", "--paths",
                                "5000", "--eps", "0.5,0.6,0.7,0.8,0.9"});
  check_golden("wiener-quant", {"wiener-quant", "--m", "16", "--paths", "64", "--eps", "1,0.8"});
  check_golden("check-theorems", {"check-theorems", "--product", "cards=2", "depth=6",
                                  "--scaling", "2,1"});
  check_golden("check-scaling", {"check-scaling", "--scaling", "2,1", "--alpha", "1.2",
                                 "--beta", "1", "--lambda", "1.1", "--grid",
                                 "0.5:0.00000095367431640625:0.5"});
}

TEST_CASE("cover reports the covering number") {
  const Run r = run_cli({"cover", "--input", "line5.csv", "--eps", "1.1"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["N"] == 2);
  CHECK(doc["config"]["command"] == "cover");
}

TEST_CASE("exit codes") {
  CHECK(run_cli({"cover", "--input", "missing.csv", "--eps", "1"}).code == 1);
  CHECK(run_cli({"cover", "--input", "line5.csv", "--eps", "-1"}).code == 1);
  const Run usage = run_cli({"cover", "--eps", "1"});
  CHECK(usage.code != 0);
  CHECK_FALSE(usage.err.empty());
  CHECK(run_cli({"frobnicate"}).code != 0);
  CHECK(run_cli({"report", "--input", "line5.csv", "--cube", "n=4"}).code != 0);
  // A band no estimate can satisfy turns into violations.
  const Run band = run_cli({"check-theorems", "--product", "cards=2", "depth=5", "--scaling",
                            "2,1", "--band", "5,6"});
  CHECK(band.code == 2);
  CHECK(nlohmann::json::parse(band.out)["violations"].get<int>() > 0);
  CHECK(run_cli({"check-theorems", "--product", "cards=2", "depth=5", "--scaling", "2,1"}).code ==
        0);
  CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("text and csv projections") {
  const Run text = run_cli({"check-theorems", "--product", "cards=2", "depth=5", "--scaling", "2,1",
                            "--format", "text"});
  CHECK(text.out.find("violations: 0") != std::string::npos);
  const Run csv = run_cli({"product", "--product", "cards=3", "depth=4", "--format", "csv"});
  CHECK(csv.out.rfind("n,eps,log_covering,log_ball_mass,lambda,oracle_ratio\n", 0) == 0);
  CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 5);
  CHECK(run_cli({"product", "--product", "cards=3", "depth=4", "--format", "text"}).code != 0);
}

TEST_CASE("output file and thread independence") {
  const fs::path out = fs::temp_directory_path() / "scales_cli_test.json";
  const std::vector<std::string> base = {"report", "--cube", "n=200", "seed=2", "--grid",
                                         "0.25:0.03125:0.5", "--restarts", "3"};
  std::string first;
  for (const char* threads : {"1", "2", "8"}) {
    auto args = base;
    args.insert(args.end(), {"--threads", threads, "--out", out.string()});
    const Run r = run_cli(args);
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    const std::string written = read_file(out);
    if (first.empty()) first = written;
    CHECK(written == first);
  }
  fs::remove(out);
}

TEST_CASE("numbers use 17 significant digits") {
  const Run r = run_cli({"check-scaling", "--scaling", "1,1", "--alpha", "2", "--beta", "1",
                         "--lambda", "1.5", "--grid", "0.1:0.001:0.1", "--window", "3"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("0.10000000000000001") != std::string::npos);
}
