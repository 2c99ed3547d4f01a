#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fuzzylimit/cli.hpp"

using namespace fuzzylimit;
using ojson = nlohmann::ordered_json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args, const std::string& stdin_text = "") {
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  int code = run_cli(args, in, out, err);
  return {code, out.str(), err.str()};
}

// Output with the timing field dropped; everything else must be stable.
std::string without_timing(const std::string& json_text) {
  auto j = ojson::parse(json_text);
  j.erase("timing_ms");
  return j.dump(2) + "\n";
}

std::string golden_path(const std::string& name) { return std::string(FUZZYLIMIT_GOLDEN_DIR) + "/" + name; }

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct GoldenCase {
  const char* file;
  std::vector<std::string> args;
  int code;
};

const std::vector<GoldenCase>& golden_cases() {
  static const std::vector<GoldenCase> cases = {
      {"limit_polynomial.json",
       {"limit", "--expr", "x^2 + x - 3", "--at", R"({"kind":"singleton","value":1})", "--seed", "42"},
       exit_code::ok},
      {"limit_rational_inf.json", {"limit", "--expr", "(2*x^2 - 1)/(1 - x^2)", "--at", "inf", "--seed", "42"},
       exit_code::ok},
      {"limit_exp_right.json",
       {"limit", "--expr", "exp(1/x)", "--at", R"({"kind":"singleton","value":0})", "--side", "right", "--seed",
        "42"},
       exit_code::diverges},
  };
  return cases;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override { unsetenv("FUZZY_LIMIT_LEVELS"); }
};

}  // namespace

TEST_F(Cli, GoldenLimitOutputs) {
  const bool update = std::getenv("FUZZYLIMIT_UPDATE_GOLDEN") != nullptr;
  for (const auto& c : golden_cases()) {
    auto first = run(c.args), second = run(c.args);
    EXPECT_EQ(first.code, c.code) << c.file;
    EXPECT_EQ(without_timing(first.out), without_timing(second.out)) << c.file;
    if (update) {
      std::ofstream(golden_path(c.file), std::ios::binary) << without_timing(first.out);
      continue;
    }
    EXPECT_EQ(without_timing(first.out), read_file(golden_path(c.file))) << c.file;
  }
}

TEST_F(Cli, PolynomialRowsAreMinusOne) {
  auto r = run(golden_cases()[0].args);
  auto j = ojson::parse(r.out);
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["mode"], "paper");
  EXPECT_EQ(j["result"]["outcome"], "Converged");
  ASSERT_EQ(j["alpha_table"].size(), 100u);
  double prev = 0;
  for (const auto& row : j["alpha_table"]) {
    EXPECT_GT(row["alpha"].get<double>(), prev);
    prev = row["alpha"].get<double>();
    EXPECT_NEAR(row["lo"].get<double>(), -1, 1e-6);
    EXPECT_NEAR(row["hi"].get<double>(), -1, 1e-6);
    EXPECT_LE(row["lo"].get<double>(), row["hi"].get<double>());
  }
  EXPECT_TRUE(j["timing_ms"].is_number());
}

TEST_F(Cli, ExitCodesPerOutcome) {
  EXPECT_EQ(run({"limit", "--expr", "x", "--at", "0", "--levels", "5"}).code, exit_code::ok);
  EXPECT_EQ(run({"limit", "--expr", "1/x^2", "--at", "0", "--levels", "5"}).code, exit_code::diverges);
  EXPECT_EQ(run({"limit", "--expr", "-1/x^2", "--at", "0", "--levels", "5"}).code, exit_code::diverges);
  EXPECT_EQ(run({"limit", "--expr", "abs(sin(x))/sin(x)", "--at", "0", "--levels", "5"}).code, exit_code::no_limit);
  EXPECT_EQ(run({"limit", "--expr", "sqrt(x)", "--at", "-1", "--levels", "5"}).code, exit_code::undetermined);
  auto und = run({"limit", "--expr", "sqrt(x)", "--at", "-1", "--levels", "5"});
  EXPECT_EQ(ojson::parse(und.out)["result"]["outcome"], "Undetermined");
}

TEST_F(Cli, UsageAndParseErrors) {
  auto bad = run({"limit", "--expr", "x^2 +* 3", "--at", "1"});
  EXPECT_EQ(bad.code, exit_code::usage);
  EXPECT_TRUE(bad.out.empty());
  EXPECT_NE(bad.err.find("offset 5"), std::string::npos);
  EXPECT_NE(bad.err.find("\n       ^"), std::string::npos) << bad.err;

  auto lex = run({"limit", "--expr", "x $ 2", "--at", "1"});
  EXPECT_EQ(lex.code, exit_code::usage);
  EXPECT_NE(lex.err.find("^"), std::string::npos);

  EXPECT_EQ(run({"limit", "--expr", "x", "--at", "{bad json"}).code, exit_code::usage);
  EXPECT_EQ(run({"limit", "--expr", "x", "--at", "inf", "--side", "left"}).code, exit_code::usage);
  EXPECT_EQ(run({"limit", "--expr", "x", "--at", "1", "--side", "up"}).code, exit_code::usage);
  EXPECT_EQ(run({"limit", "--expr", "x", "--at", "1", "--mode", "rigorous:0"}).code, exit_code::usage);
  EXPECT_EQ(run({"limit", "--expr", "x", "--at", "1", "--levels", "2"}).code, exit_code::usage);
  EXPECT_EQ(run({"limit", "--expr", "x", "--at", "1", "--certify", "0.1,0.5"}).code, exit_code::usage);
  EXPECT_EQ(run({"limit", "--expr", "x", "--at", "1", "--certify", "abc"}).code, exit_code::usage);
  EXPECT_EQ(run({"limit", "--expr", "x"}).code, exit_code::usage);
  EXPECT_EQ(run({"nosuch"}).code, exit_code::usage);
  EXPECT_EQ(run({}).code, exit_code::usage);
  EXPECT_EQ(run({"--help"}).code, exit_code::ok);
}

TEST_F(Cli, ExpressionFromStdin) {
  auto r = run({"limit", "--expr", "-", "--at", "2", "--levels", "3", "--format", "csv"}, "x^2\n");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "alpha,lo,hi\n0.5,4,4\n1,4,4\n");
}

TEST_F(Cli, CsvFormatTwelveDigits) {
  auto r = run({"limit", "--expr", "x/3", "--at", "1", "--levels", "3", "--format", "csv"});
  EXPECT_EQ(r.out, "alpha,lo,hi\n0.5,0.333333333333,0.333333333333\n1,0.333333333333,0.333333333333\n");
}

TEST_F(Cli, LevelsFromEnvironment) {
  setenv("FUZZY_LIMIT_LEVELS", "5", 1);
  auto r = run({"limit", "--expr", "x", "--at", "1"});
  EXPECT_EQ(ojson::parse(r.out)["alpha_table"].size(), 4u);
  // the flag wins over the environment
  auto f = run({"limit", "--expr", "x", "--at", "1", "--levels", "3"});
  EXPECT_EQ(ojson::parse(f.out)["alpha_table"].size(), 2u);
  setenv("FUZZY_LIMIT_LEVELS", "lots", 1);
  EXPECT_EQ(run({"limit", "--expr", "x", "--at", "1"}).code, exit_code::usage);
  unsetenv("FUZZY_LIMIT_LEVELS");
}

TEST_F(Cli, CertificateAndSequentialSections) {
  auto r = run({"limit", "--expr", "x^2 + x - 3", "--at", "1", "--levels", "5", "--certify", "0.1,0.01,0.001",
                "--sequential", "10", "--seed", "3"});
  auto j = ojson::parse(r.out);
  EXPECT_EQ(j["certificate"]["kind"], "delta");
  EXPECT_EQ(j["certificate"]["certified"], true);
  EXPECT_EQ(j["sequential"]["passed"], true);
  auto div = run({"limit", "--expr", "1/x^2", "--at", "0", "--levels", "5", "--certify", "0.1"});
  EXPECT_TRUE(ojson::parse(div.out)["certificate"].is_null());
  EXPECT_NE(div.err.find("skipped"), std::string::npos);
}

TEST_F(Cli, VerboseWarnsAboutTinyOffsets) {
  auto r = run({"limit", "--expr", "x", "--at", "1", "--levels", "3", "--verbose"});
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  EXPECT_TRUE(run({"limit", "--expr", "x", "--at", "1", "--levels", "3"}).err.empty());
}

TEST_F(Cli, EvalCommand) {
  auto r = run({"eval", "--expr", "2*x", "--x", R"({"kind":"triangular","a":0,"b":0.5,"c":1})", "--levels", "5"});
  EXPECT_EQ(r.code, 0);
  auto j = ojson::parse(r.out);
  for (const auto& row : j["alpha_table"]) {
    double a = row["alpha"];
    EXPECT_NEAR(row["lo"].get<double>(), a, 1e-15);
    EXPECT_NEAR(row["hi"].get<double>(), 2 - a, 1e-15);
  }
  auto seven = run({"eval", "--expr", "x", "--x", R"({"kind":"singleton","value":7})"});
  for (const auto& row : ojson::parse(seven.out)["alpha_table"]) {
    EXPECT_EQ(row["lo"], 7.0);
    EXPECT_EQ(row["hi"], 7.0);
  }
  auto zero = run({"eval", "--expr", "x/0", "--x", "1"});
  EXPECT_EQ(zero.code, exit_code::domain);
  EXPECT_NE(zero.err.find("alpha="), std::string::npos);
  EXPECT_EQ(ojson::parse(zero.out)["result"]["outcome"], "DomainError");
  EXPECT_EQ(run({"eval", "--expr", "x +", "--x", "1"}).code, exit_code::usage);
  EXPECT_EQ(run({"eval", "--expr", "x", "--x", "{"}).code, exit_code::usage);
}

TEST_F(Cli, MembershipCommand) {
  auto r = run({"membership", "--number", R"({"kind":"triangular","a":0,"b":0.5,"c":1})", "--from", "0", "--to",
                "1", "--points", "4"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "x,grade\n0,0\n0.25,0.5\n0.5,1\n0.75,0.5\n1,0\n");
  auto s = run({"membership", "--number", R"({"kind":"singleton","value":2})", "--from", "0", "--to", "1",
                "--points", "3"});
  EXPECT_EQ(s.out, "x,grade\n0,0\n0.333333333333,0\n0.666666666667,0\n1,0\n");
  EXPECT_EQ(run({"membership", "--number", "2", "--from", "0", "--to", "1", "--points", "0"}).code, 1);
  EXPECT_EQ(run({"membership", "--number", "2", "--from", "1", "--to", "1", "--points", "3"}).code, 1);
}

TEST_F(Cli, VerifyCommand) {
  auto r = run({"verify", "--suite", "algebra", "--f", "x^2", "--g", "x", "--at", R"({"kind":"singleton","value":1})"});
  EXPECT_EQ(r.code, 0);
  std::istringstream lines(r.out);
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) {
    auto j = ojson::parse(line);
    EXPECT_TRUE(j["status"] == "Holds" || j["status"] == "Inapplicable");
    EXPECT_TRUE(j.contains("theorem") && j.contains("max_alpha_gap") && j.contains("notes"));
    ++n;
  }
  EXPECT_EQ(n, 4);
  EXPECT_EQ(run({"verify", "--suite", "nosuch"}).code, exit_code::usage);
  for (const char* suite : {"order", "composition", "uniqueness", "agreement"})
    EXPECT_EQ(run({"verify", "--suite", suite}).code, 0) << suite;
}

TEST_F(Cli, VerifyAllIsDeterministic) {
  auto a = run({"verify", "--suite", "all", "--seed", "42"});
  auto b = run({"verify", "--suite", "all", "--seed", "42"});
  EXPECT_EQ(a.code, 0) << a.out;
  EXPECT_EQ(a.out, b.out);
}
