#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "cli.hpp"
#include "stabrad/pencil_io.hpp"
#include "stabrad/radius.hpp"
#include "support.hpp"

using namespace stabrad;
using namespace stabrad::testing;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"pencil-radius"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string data_file(const std::string& name) {
  return std::string(STABRAD_DATA_DIR) + "/" + name;
}

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("stabrad_cli_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

const std::vector<std::string> kFast = {"--budget-starts", "6", "--budget-evals", "300"};

std::vector<std::string> radius_args(const std::string& input) {
  std::vector<std::string> a{"radius", input};
  a.insert(a.end(), kFast.begin(), kFast.end());
  return a;
}

}  // namespace

TEST(Cli, RadiusSummarySwap) {
  const CliRun r = run_cli(radius_args(data_file("swap_s.json")));
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("d ≈ 1.414214 (oracle) | 1.41 (bart-lay) | 1.414214 (gen-inv), k=0"),
            std::string::npos)
      << r.out;
}

TEST(Cli, RadiusSummaryInfinite) {
  const CliRun r = run_cli(radius_args(data_file("identity_zero.json")));
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("d = inf (oracle) | inf (bart-lay) | inf (gen-inv), k=0"), std::string::npos)
      << r.out;
}

TEST(Cli, HypothesisViolationExitsTwo) {
  const CliRun r = run_cli(radius_args(data_file("k_positive.json")));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("k=1"), std::string::npos);
  EXPECT_NE(r.out.find("warning [HypothesisViolated]"), std::string::npos) << r.out;
}

TEST(Cli, JsonOutToFileAndStdout) {
  TempDir dir;
  const std::string path = dir.file("report.json");
  auto args = radius_args(data_file("diag_half_two.json"));
  args.insert(args.end(), {"--json-out", path});
  ASSERT_EQ(run_cli(args).code, 0);
  const RadiusReport rep = report_from_json(read_text_file(path));
  EXPECT_NEAR(rep.d_oracle, 0.5, 1e-12);

  args.back() = "-";
  const CliRun r = run_cli(args);
  EXPECT_EQ(r.out.rfind("{", 0), 0u);
  EXPECT_EQ(r.out.find("timings_seconds"), std::string::npos);
}

TEST(Cli, MissingFileExitsOne) {
  const CliRun r = run_cli({"radius", "/nonexistent/pencil.json"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("error:"), std::string::npos);
}

TEST(Cli, UnknownOptionExitsOne) {
  EXPECT_EQ(run_cli({"radius", data_file("swap_s.json"), "--bogus"}).code, 1);
  EXPECT_EQ(run_cli({}).code, 1);
}

TEST(Cli, GammaSeqCsv) {
  const CliRun r = run_cli({"gamma-seq", data_file("diag_half_two.json"), "--m-max", "4"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("m,gamma_m,gamma_root,gamma_ratio\n", 0), 0u);
  EXPECT_NE(r.out.find("\n3,0.1250000"), std::string::npos) << r.out;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 5);
}

TEST(Cli, GammaSeqInfiniteFromSecondStep) {
  const CliRun r = run_cli({"gamma-seq", data_file("identity_zero.json"), "--m-max", "3"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\n2,inf,"), std::string::npos) << r.out;
}

TEST(Cli, GenPlantsTheRequestedDrops) {
  TempDir dir;
  const std::string path = dir.file("gen.json");
  const CliRun g = run_cli({"gen", path, "--seed", "5", "--n", "4", "--p", "4", "--drops", "0.7,2.0"});
  ASSERT_EQ(g.code, 0) << g.err;
  const PencilFile f = load_pencil(path);
  EXPECT_EQ(f.metadata.seed, 5u);
  EXPECT_NEAR(d_oracle(f.pencil).d, 0.7, 1e-9);

  const CliRun again = run_cli({"gen", dir.file("gen2.json"), "--seed", "5", "--n", "4", "--p", "4",
                             "--drops", "0.7,2.0"});
  ASSERT_EQ(again.code, 0);
  EXPECT_EQ(read_text_file(dir.file("gen2.json")), read_text_file(path));
}

TEST(Cli, GenComplexDrop) {
  TempDir dir;
  const std::string path = dir.file("c.json");
  ASSERT_EQ(run_cli({"gen", path, "--seed", "1", "--n", "3", "--p", "3", "--drops", "0.3:0.4"}).code, 0);
  EXPECT_NEAR(d_oracle(load_pencil(path).pencil).d, 0.5, 1e-9);
}

TEST(Cli, GenKPositiveHasPositiveK) {
  TempDir dir;
  const std::string path = dir.file("k.json");
  ASSERT_EQ(run_cli({"gen", path, "--seed", "3", "--n", "3", "--p", "3", "--kind", "k-positive"}).code,
            0);
  EXPECT_GE(limit_spaces(load_pencil(path).pencil).k, 1);
}

TEST(Cli, GenRejectsBadInput) {
  TempDir dir;
  EXPECT_EQ(run_cli({"gen", dir.file("x.json"), "--seed", "1", "--n", "3", "--p", "3"}).code, 1);
  EXPECT_EQ(run_cli({"gen", dir.file("x.json"), "--seed", "1", "--drops", "abc"}).code, 1);
  EXPECT_EQ(run_cli({"gen", dir.file("x.json"), "--drops", "1"}).code, 1);
  EXPECT_EQ(run_cli({"gen", dir.file("x.json"), "--seed", "1", "--kind", "weird"}).code, 1);
  EXPECT_FALSE(std::filesystem::exists(dir.file("x.json")));
}

TEST(Cli, CheckPassesForKZero) {
  const CliRun r = run_cli({"check", data_file("swap_s.json")});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("PASS"), std::string::npos);
  EXPECT_EQ(r.out.find("FAIL "), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("all checks behave as expected"), std::string::npos);
}

TEST(Cli, CheckMarksPredictedFailures) {
  const CliRun r = run_cli({"check", data_file("k_positive.json")});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("FAIL-AS-EXPECTED"), std::string::npos) << r.out;
}

TEST(Cli, CheckSuiteStatusesOnRandomPencils) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    cli::CheckConfig config;
    config.seed = seed;
    for (const cli::CheckLine& line : cli::run_checks(random_k0_pencil(seed), config))
      EXPECT_NE(line.status, cli::CheckStatus::Fail)
          << "seed " << seed << ": " << line.name << " residual " << line.residual;
  }
}

TEST(Cli, ThreadBudgetHonoursCap) {
  ::setenv("PENCIL_RADIUS_THREADS", "1", 1);
  EXPECT_EQ(cli::thread_budget(), 1);
  ::unsetenv("PENCIL_RADIUS_THREADS");
  EXPECT_GE(cli::thread_budget(), 1);
}

TEST(Cli, BinaryReportsVersion) {
  const std::string cmd = std::string("\"") + STABRAD_CLI_PATH + "\" --version > /dev/null";
  EXPECT_EQ(std::system(cmd.c_str()), 0);
}
