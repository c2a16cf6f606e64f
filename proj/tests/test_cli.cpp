#include "rbahp/cli.hpp"

#include <gtest/gtest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace rbahp {
namespace {

namespace fs = std::filesystem;

const std::string kDataDir = RBAHP_DATA_DIR;
const std::string kH1 = kDataDir + "/h1.rhf";

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "rbahp");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path write_temp(const std::string& name, const std::string& content) {
  const auto path = fs::temp_directory_path() / ("rbahp_test_" + std::to_string(::getpid()) + "_" + name);
  std::ofstream(path) << content;
  return path;
}

TEST(Cli, RankTsv) {
  const auto r = run_cli({"rank", "--hierarchy", kH1, "--require", "p1,p2", "--s", "2"});
  EXPECT_EQ(r.code, cli::kExitOk);
  EXPECT_EQ(r.out, "1\tr2\t0.555556\t2\t1\n2\tr1\t0.444444\t1\t2\n");
  EXPECT_EQ(r.err, "");
}

TEST(Cli, RankShortFlagAndTie) {
  const auto r = run_cli({"rank", "--hierarchy", kH1, "--require", "p1,p2", "-s", "1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "1\tr1\t0.500000\t1\t2\n2\tr2\t0.500000\t2\t1\n");
}

TEST(Cli, RankWithExtendedCriterionAddsColumns) {
  const auto r = run_cli({"rank", "--hierarchy", kH1, "--require", "p1,p2", "--s", "2", "--criterion",
                          "availability", "--criterion", "manager-cost=0.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_TRUE(line.starts_with("1\tr2\t")) << line;
  EXPECT_TRUE(line.ends_with("\t2\t1\t4\t1")) << line;
}

TEST(Cli, RequireFromFile) {
  const auto file = write_temp("require.txt", "p1\n\np2\n");
  const auto r = run_cli({"rank", "--hierarchy", kH1, "--require", "@" + file.string(), "--s", "2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "1\tr2\t0.555556\t2\t1\n2\tr1\t0.444444\t1\t2\n");
  fs::remove(file);
}

TEST(Cli, Authorize) {
  EXPECT_EQ(run_cli({"authorize", "--hierarchy", kH1, "--require", "p1,p2,p3,p4"}).out, "exact-match r2\n");
  EXPECT_EQ(run_cli({"authorize", "--hierarchy", kH1, "--require", "p1,p2", "--s", "2"}).out, "ranked r2\n");
}

TEST(Cli, JsonAndTsvCarrySameValues) {
  const auto tsv = run_cli({"rank", "--hierarchy", kH1, "--require", "p1,p2", "--s", "2"});
  const auto js = run_cli({"rank", "--hierarchy", kH1, "--require", "p1,p2", "--s", "2", "--output", "json"});
  ASSERT_EQ(js.code, 0);
  const auto doc = nlohmann::json::parse(js.out);
  std::istringstream lines(tsv.out);
  std::string line;
  std::size_t i = 0;
  while (std::getline(lines, line)) {
    const auto& score = doc["scores"][i];
    const std::string expected = std::to_string(i + 1) + "\t" + score["role"].get<std::string>() + "\t" +
                                 cli::detail::fixed6(score["probability"].get<double>()) + "\t" +
                                 std::to_string(score["dp"].get<int>()) + "\t" +
                                 std::to_string(score["dr"].get<int>());
    EXPECT_EQ(line, expected);
    ++i;
  }
  EXPECT_EQ(i, doc["scores"].size());
}

TEST(Cli, RepeatedRunsAreByteIdentical) {
  const std::vector<std::string> args{"sweep", "--hierarchy", kDataDir + "/office.rhf", "--require", "doc.read",
                                      "--s-min", "0.01", "--s-max", "100", "--steps", "15", "--criterion",
                                      "integrity", "--output", "json"};
  const auto first = run_cli(args);
  ASSERT_EQ(first.code, 0) << first.err;
  for (int i = 0; i < 3; ++i) EXPECT_EQ(run_cli(args).out, first.out);
}

TEST(Cli, Sweep) {
  const auto r = run_cli(
      {"sweep", "--hierarchy", kH1, "--require", "p1,p2", "--s-min", "0.5", "--s-max", "2", "--steps", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("change\t0.793701\t1.25992\tr1,r2\tr2,r1\n"), std::string::npos) << r.out;
  EXPECT_TRUE(r.out.starts_with("0.5\t1\tr1\t"));
}

TEST(Cli, Validate) {
  const auto ok = run_cli({"validate", "--hierarchy", kH1});
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(ok.out, "ok\t3 roles\t4 permissions\n");

  const auto cyclic = run_cli({"validate", "--hierarchy", kDataDir + "/cyclic.rhf"});
  EXPECT_EQ(cyclic.code, cli::kExitDomain);
  EXPECT_NE(cyclic.out.find("\tCYCLE\t"), std::string::npos);
  EXPECT_TRUE(cyclic.out.ends_with("invalid\n"));

  const auto js = run_cli({"validate", "--hierarchy", kDataDir + "/cyclic.rhf", "--output", "json"});
  EXPECT_FALSE(nlohmann::json::parse(js.out)["ok"].get<bool>());
}

TEST(Cli, ValidateReportsWarningsButSucceeds) {
  const auto file = write_temp("warn.rhf", "permission used\npermission spare\nrole r\ngrant r used\n");
  const auto r = run_cli({"validate", "--hierarchy", file.string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("warning\tUNUSED_PERMISSION"), std::string::npos) << r.out;
  fs::remove(file);
}

TEST(Cli, DomainErrorsExitOne) {
  auto r = run_cli({"rank", "--hierarchy", kH1, "--require", "nope"});
  EXPECT_EQ(r.code, cli::kExitDomain);
  EXPECT_TRUE(r.err.starts_with("error: UNKNOWN_PERMISSION: ")) << r.err;
  EXPECT_EQ(r.out, "");

  r = run_cli({"rank", "--hierarchy", kDataDir + "/cyclic.rhf", "--require", "x"});
  EXPECT_EQ(r.code, cli::kExitDomain);
  EXPECT_NE(r.err.find("CYCLE"), std::string::npos);

  r = run_cli({"rank", "--hierarchy", kH1, "--require", "p1", "--criterion", "popularity"});
  EXPECT_EQ(r.code, cli::kExitDomain);
  EXPECT_NE(r.err.find("UNKNOWN_CRITERION"), std::string::npos);

  const auto orphan = write_temp("orphan.rhf", "permission lone\nrole r\n");
  r = run_cli({"authorize", "--hierarchy", orphan.string(), "--require", "lone"});
  EXPECT_EQ(r.code, cli::kExitDomain);
  EXPECT_NE(r.err.find("NO_CANDIDATE"), std::string::npos);
  fs::remove(orphan);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run_cli({}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"rank", "--hierarchy", kH1}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"rank", "--hierarchy", kH1, "--require", "p1", "--s", "0"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"rank", "--hierarchy", kH1, "--require", "p1", "--s", "abc"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"rank", "--hierarchy", "/nonexistent/h.rhf", "--require", "p1"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"rank", "--hierarchy", kH1, "--require", "p1", "--output", "xml"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"sweep", "--hierarchy", kH1, "--require", "p1", "--steps", "1"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"sweep", "--hierarchy", kH1, "--require", "p1", "--s-min", "2", "--s-max", "1"}).code,
            cli::kExitUsage);
}

TEST(Cli, HelpExitsZero) {
  const auto r = run_cli({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("rank"), std::string::npos);
}

}  // namespace
}  // namespace rbahp
