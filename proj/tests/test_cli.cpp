#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "json.hpp"

using tpbvp::cli::run_cli;
using Json = nlohmann::ordered_json;

namespace {

struct CliRun {
  int code;
  std::string out, err;
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::filesystem::path temp(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("tpbvp_cli_" + name);
}

}  // namespace

TEST(Cli, GreensDump) {
  const CliRun r = run({"greens", "--dump", "5"});
  ASSERT_EQ(r.code, 0);
  std::istringstream is(r.out);
  std::vector<std::vector<std::string>> rows;
  for (std::string line; std::getline(is, line);) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    rows.push_back(cells);
  }
  ASSERT_EQ(rows.size(), 6u);
  for (const auto& row : rows) ASSERT_EQ(row.size(), 6u);
  EXPECT_EQ(rows[0][1], "0");
  EXPECT_EQ(rows[0][5], "1");
  EXPECT_EQ(rows[1][1], "0");
  EXPECT_EQ(rows[1][5], "0");
  EXPECT_EQ(rows[5][1], "0");
  EXPECT_EQ(rows[5][5], "0");
  EXPECT_EQ(rows[3][3], "0.03125");
  EXPECT_EQ(r.out.find('\r'), std::string::npos);
  EXPECT_EQ(run({"greens", "--dump", "1"}).code, 1);
}

TEST(Cli, Classify) {
  const CliRun lin = run({"classify", "--f", "u"});
  ASSERT_EQ(lin.code, 0);
  EXPECT_EQ(Json::parse(lin.out)["verdict"], "indeterminate");
  const CliRun sup = run({"classify", "--f", "u^2*exp(u)"});
  EXPECT_EQ(Json::parse(sup.out)["verdict"], "superlinear");
  const CliRun hyp = run({"classify", "--f", "sqrt(u)+ln(1+u)", "--g", "t^6"});
  const Json j = Json::parse(hyp.out);
  EXPECT_EQ(j["verdict"], "sublinear");
  EXPECT_EQ(j["hypotheses"]["h1"]["note"], "sampled, not proven");
  EXPECT_TRUE(j["hypotheses"]["passed"].get<bool>());
  EXPECT_EQ(run({"classify", "--f", "ln(u-1)"}).code, 1);
}

TEST(Cli, SolveSyntaxError) {
  const CliRun r = run({"solve", "--f", "u+", "--g", "t"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("syntax error"), std::string::npos);
  EXPECT_NE(r.err.find("1:3"), std::string::npos);
}

TEST(Cli, SolveUsageErrors) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"solve", "--f", "u"}).code, 1);
  EXPECT_EQ(run({"solve", "--f", "u", "--g", "t", "--grid", "512"}).code, 1);
  EXPECT_EQ(run({"solve", "--f", "u", "--g", "t", "--theta", "0.7"}).code, 1);
  EXPECT_EQ(run({"solve", "--f", "u", "--g", "t", "--grid", "abc"}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, SolveSuperlinearExampleWritesFiles) {
  const auto csv = temp("sup.csv"), json = temp("sup.json");
  const CliRun r = run({"solve", "--f", "u^2*exp(u)", "--g", "t^4", "--out", csv.string(), "--report", json.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(slurp(json));
  EXPECT_EQ(j["verdict"], "superlinear");
  EXPECT_EQ(j["config"]["grid"], 513);
  EXPECT_EQ(j["config"]["panels"], 64);
  EXPECT_EQ(j["config"]["theta"], 0.25);
  EXPECT_EQ(j["config"]["tol"], 1e-10);
  EXPECT_EQ(j["solution"]["status"], "positive");
  EXPECT_TRUE(j["found"].get<bool>());
  const std::string text = slurp(csv);
  EXPECT_EQ(text.rfind("t,u\n", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 514);

  // Byte-identical on a second run.
  const CliRun again = run({"solve", "--f", "u^2*exp(u)", "--g", "t^4", "--out", csv.string(), "--report", json.string()});
  EXPECT_EQ(again.code, 0);
  EXPECT_EQ(slurp(csv), text);
  std::filesystem::remove(csv);
  std::filesystem::remove(json);
}

TEST(Cli, SolveSublinearExampleToStdout) {
  const CliRun r = run({"solve", "--f", "sqrt(u)+ln(1+u)", "--g", "t^6"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["verdict"], "sublinear");
  EXPECT_EQ(j["exit_code"], 0);
  EXPECT_EQ(j["classification"]["f0"]["kind"], "infinity");
}

TEST(Cli, SolveHypothesisFailure) {
  const CliRun r = run({"solve", "--f", "u - 1", "--g", "t"});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(r.err.empty());
  EXPECT_FALSE(Json::parse(r.out)["hypotheses"]["h1"]["passed"].get<bool>());
  EXPECT_EQ(run({"solve", "--f", "u", "--g", "0"}).code, 2);
}

TEST(Cli, SolveNotFound) {
  const CliRun r = run({"solve", "--f", "u", "--g", "t^4", "--grid", "65"});
  EXPECT_EQ(r.code, 3);
  const Json j = Json::parse(r.out);
  EXPECT_FALSE(j["found"].get<bool>());
  EXPECT_EQ(j["attempts"].size(), 16u);
}

TEST(Cli, Verify) {
  const CliRun r = run({"verify"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["violations"], 0);
  EXPECT_EQ(j["kernel"]["samples"], 1001);
  EXPECT_EQ(run({"verify"}).out, r.out);
  EXPECT_EQ(run({"verify", "--samples", "3"}).code, 1);
  EXPECT_EQ(run({"verify", "--theta", "0.6"}).code, 1);
  EXPECT_EQ(run({"verify", "--g", "t^6", "--theta", "0.1", "--samples", "101"}).code, 0);
  EXPECT_EQ(run({"verify", "--g", "t-1"}).code, 1);
}
