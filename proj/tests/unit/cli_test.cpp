#include <gtest/gtest.h>

#include <nlohmann/json.hpp>
#include <sstream>

#include "chainlab/cli.hpp"
#include "support/fixtures.hpp"

namespace chainlab {
namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const char* name) { return testing::fixture_path(name).string(); }

TEST(Cli, EvolveTwoSteps) {
  const auto r = run({"evolve", "--steps", "2", fixture("problem_2_3.json")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("0.3"), std::string::npos);
  EXPECT_NE(r.out.find("0.7"), std::string::npos);
}

TEST(Cli, StationaryJson) {
  const auto r = run({"stationary", fixture("problem_3_2.json"), "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["stationary"]["pi"][0].get<double>(), 0.15, 1e-9);
  EXPECT_EQ(j["stationary"]["method"], "direct");
}

TEST(Cli, StationaryPowerMethod) {
  const auto r = run({"--format", "json", "stationary", "--method", "power", fixture("problem_2_3.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["stationary"]["pi"][0].get<double>(), 0.4, 1e-8);
  EXPECT_EQ(j["stationary"]["method"], "power");
}

TEST(Cli, AbsorbWeightedTime) {
  const auto r = run({"absorb", fixture("problem_4_1.json"), "--start", "collection"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("65.5"), std::string::npos);
}

TEST(Cli, ValidateAndClassify) {
  auto r = run({"validate", fixture("problem_4_2.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("valid"), std::string::npos);
  r = run({"classify", "--format", "json", fixture("problem_4_2.json")});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out)["classification"]["chain_type"], "Absorbing");
}

TEST(Cli, SimulateIsDeterministic) {
  const std::vector<std::string> args{"--format", "json", "simulate", "--quantity", "absorption",
                                      "--start", "A2", "--trials", "3000", "--seed", "17",
                                      fixture("problem_4_2.json")};
  const auto a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  auto threaded = args;
  threaded.insert(threaded.end() - 1, {"--threads", "3"});
  EXPECT_EQ(run(threaded).out, a.out);
}

TEST(Cli, ReportIsDeterministic) {
  const std::vector<std::string> args{"--format", "json", "report", "--trials", "2000", "--seed", "3",
                                      fixture("problem_4_3.json")};
  const auto a = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, run(args).out);
  EXPECT_EQ(nlohmann::json::parse(a.out)["simulation"]["seed"], 3);
}

TEST(Cli, AnalysisErrorsExitOne) {
  auto r = run({"validate", fixture("malformed/row_sum.json")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("transitions[0]"), std::string::npos);
  r = run({"stationary", fixture("problem_4_1.json")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("NotErgodic"), std::string::npos);
  r = run({"absorb", fixture("problem_2_3.json")});
  EXPECT_EQ(r.code, 1);
  r = run({"absorb", "--start", "nowhere", fixture("problem_4_1.json")});
  EXPECT_EQ(r.code, 1);
  r = run({"validate", fixture("no_such_file.json")});
  EXPECT_EQ(r.code, 1);
}

TEST(Cli, RenormalizeFlag) {
  // Row sums of 0.9 are outside the renormalization window, so the flag does not rescue them.
  EXPECT_EQ(run({"--renormalize", "validate", fixture("malformed/row_sum.json")}).code, 1);
  EXPECT_EQ(run({"--tolerance", "0.2", "validate", fixture("malformed/row_sum.json")}).code, 0);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"evolve", fixture("problem_2_3.json")}).code, 2);
  EXPECT_EQ(run({"stationary", "--method", "magic", fixture("problem_2_3.json")}).code, 2);
  EXPECT_EQ(run({"--format", "xml", "validate", fixture("problem_2_3.json")}).code, 2);
  EXPECT_EQ(run({"simulate", fixture("problem_2_3.json")}).code, 2);
  EXPECT_EQ(run({"evolve", "--steps", "two", fixture("problem_2_3.json")}).code, 2);
}

TEST(Cli, HelpExitsZero) { EXPECT_EQ(run({"--help"}).code, 0); }

}  // namespace
}  // namespace chainlab
