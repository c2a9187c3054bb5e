#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "m0n/cli.hpp"
#include "m0n/json_io.hpp"

using namespace m0n;
using m0n::json_io::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "m0n_cli");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("m0n_cli_test_" + name);
  std::ofstream(path) << content;
  return path.string();
}

}  // namespace

TEST(Cli, TreesCounts) {
  const Result r = run_cli({"trees", "--n", "5", "--edges", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["count"], 15);
  EXPECT_EQ(j["families"].size(), 15u);
  EXPECT_EQ(j["families"][0], json::parse("[[1,2],[3,4]]"));
  EXPECT_EQ(json::parse(run_cli({"trees", "--n", "4", "--edges", "1"}).out)["count"], 3);
}

TEST(Cli, InputErrorsExitTwo) {
  EXPECT_EQ(run_cli({"trees", "--n", "5", "--edges", "3"}).code, 2);
  EXPECT_EQ(run_cli({"trees", "--n", "2", "--edges", "0"}).code, 2);
  EXPECT_EQ(run_cli({"trees", "--n", "5"}).code, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
  EXPECT_EQ(run_cli({"--format", "csv", "trees", "--n", "5", "--edges", "1"}).code, 2);
  EXPECT_EQ(run_cli({"intersect", "/nonexistent/a.json", "/nonexistent/b.json"}).code, 2);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
}

TEST(Cli, GramFourPoints) {
  const Result r = run_cli({"gram", "--n", "4", "--inverse"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["order"], json::parse(R"(["1","x{1,2,3}"])"));
  EXPECT_EQ(j["M"], json::parse(R"([["0","-1"],["-1","0"]])"));
  EXPECT_EQ(j["Minv"], json::parse(R"([["0","-1"],["-1","0"]])"));
}

TEST(Cli, GramCsv) {
  const Result r = run_cli({"--format", "csv", "gram", "--n", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "\"\",\"1\",\"x{1,2,3}\"\n\"1\",0,-1\n\"x{1,2,3}\",-1,0\n");
}

TEST(Cli, GramBeyondBoundIsCapabilityError) {
  const Result r = run_cli({"gram", "--n", "8"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("capability"), std::string::npos);
}

TEST(Cli, BasisListing) {
  const Result r = run_cli({"basis", "--n", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["dimensions"], json::parse("[1,5,1]"));
  EXPECT_EQ(j["basis"][5]["name"], "x{1,2,3,4}");
  EXPECT_EQ(j["basis"][5]["star"], "x{1,2,3,4}");
  EXPECT_EQ(j["basis"][5]["star_sign"], 1);
}

TEST(Cli, Intersect) {
  const std::string a = temp_file("a.json", R"({"n":5,"sets":[[1,2,3]]})");
  const std::string sq = temp_file("sq.json", R"({"n":5,"sets":[[1,2]],"mult":[1]})");
  const std::string one = temp_file("one.json", R"({"n":5,"sets":[]})");
  Result r = run_cli({"intersect", a, a});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["value"], "-1");

  r = run_cli({"intersect", sq, one});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["value"], "0");
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  EXPECT_TRUE(run_cli({"--quiet", "intersect", sq, one}).err.empty());

  r = run_cli({"intersect", "--oracle", a, a});
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_EQ(j["oracle"], "-1");
  EXPECT_EQ(j["agree"], true);

  const std::string bad = temp_file("bad.json", R"({"n":5,"sets":[[2,1]]})");
  EXPECT_EQ(run_cli({"intersect", bad, a}).code, 2);
}

TEST(Cli, VerifySuites) {
  Result r = run_cli({"verify", "--n", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  json j = json::parse(r.out);
  EXPECT_EQ(j["passed"], true);
  EXPECT_EQ(j["checks"].size(), 5u);
  EXPECT_NE(r.err.find("PASS oracle-equivalence"), std::string::npos);

  r = run_cli({"--quiet", "verify", "--n", "6", "--suite", "t-diagonal"});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.err.empty());

  r = run_cli({"verify", "--n", "7", "--suite", "pd-failure"});
  EXPECT_EQ(r.code, 0) << r.err;

  // The diagonal claim is false at n = 7, which verify reports as a failure.
  r = run_cli({"verify", "--n", "7", "--suite", "t-diagonal"});
  EXPECT_EQ(r.code, 4);
  EXPECT_EQ(json::parse(r.out)["passed"], false);

  EXPECT_EQ(run_cli({"verify", "--n", "5", "--suite", "nonsense"}).code, 2);
  EXPECT_EQ(run_cli({"verify", "--n", "8"}).code, 3);
}

TEST(Cli, TensorUnitLaw) {
  const std::string point = temp_file("point.json", R"({"dim":1,"metric":[["1"]],"correlators":{"3":[{"idx":[1,1,1],"val":"1"}]},"truncation":5})");
  const std::string two = temp_file("two.json", R"({"dim":2,"metric":[["0","1"],["1","0"]],"truncation":5,
    "correlators":{"3":[{"idx":[1,1,2],"val":"1"},{"idx":[2,2,2],"val":"1/2"}],"4":[{"idx":[2,2,2,2],"val":"-3"}],"5":[{"idx":[2,2,2,2,2],"val":"2"}]}})");
  const Result r = run_cli({"tensor", point, two, "--order", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["dim"], 2);
  EXPECT_EQ(j["coeffs"], json::parse(R"({"2,1":"1/2","0,3":"1/12","0,4":"-1/8","0,5":"1/60"})"));
  EXPECT_EQ(run_cli({"tensor", point, two, "--order", "2"}).code, 2);
  EXPECT_EQ(run_cli({"tensor", point, two}).code, 2);
}

TEST(Cli, TensorRejectsBadData) {
  const std::string singular = temp_file("sing.json", R"({"dim":2,"metric":[["1","1"],["1","1"]],"correlators":{}})");
  const std::string point = temp_file("point2.json", R"({"dim":1,"metric":[["1"]],"correlators":{"3":[{"idx":[1,1,1],"val":"1"}]}})");
  EXPECT_EQ(run_cli({"tensor", singular, point, "--order", "3"}).code, 2);
  const std::string conflict = temp_file("conf.json", R"({"dim":2,"metric":[["0","1"],["1","0"]],
    "correlators":{"3":[{"idx":[1,1,2],"val":"1"},{"idx":[2,1,1],"val":"2"}]}})");
  EXPECT_EQ(run_cli({"tensor", conflict, point, "--order", "3"}).code, 2);
  // Arity above the declared truncation cannot be produced.
  EXPECT_EQ(run_cli({"tensor", point, point, "--order", "4"}).code, 3);
}

TEST(Cli, OutputFileAndDeterminism) {
  const auto path = (std::filesystem::temp_directory_path() / "m0n_cli_test_gram5.json").string();
  const Result r = run_cli({"--output", path, "gram", "--n", "5"});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), run_cli({"gram", "--n", "5"}).out);
  EXPECT_EQ(run_cli({"basis", "--n", "6"}).out, run_cli({"basis", "--n", "6"}).out);
}
