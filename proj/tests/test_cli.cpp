#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace soi::cli {
namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

bool has(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

TEST(Cli, BigoHolds) {
  const Result r = call({"bigo", "u^2", "u"});
  EXPECT_EQ(r.code, kHolds);
  EXPECT_TRUE(has(r.out, "verdict: holds"));
  EXPECT_TRUE(has(r.out, "witness: H ="));
}

TEST(Cli, BigoFailsWithCsvCounterexample) {
  const std::string path = ::testing::TempDir() + "soi_cli_counter.csv";
  const Result r = call({"bigo", "1", "u", "--csv", path});
  EXPECT_EQ(r.code, kFails);
  EXPECT_TRUE(has(r.out, "counterexample"));
  std::ifstream f(path);
  std::string head, row;
  std::getline(f, head);
  EXPECT_EQ(head, "k,gauge,abs_x,H_abs_y");
  int rows = 0;
  while (std::getline(f, row)) ++rows;
  EXPECT_GE(rows, 3);
  std::remove(path.c_str());
}

TEST(Cli, LogFactorIsNotAbsorbed) {
  EXPECT_EQ(call({"bigo", "u*L", "u"}).code, kFails);
  EXPECT_EQ(call({"bigo", "u^2*L", "u"}).code, kHolds);
}

TEST(Cli, BigoOtherInstancesAndSampled) {
  EXPECT_EQ(call({"--index", "full", "bigo", "u^2", "u"}).code, kHolds);
  EXPECT_EQ(call({"bigo", "--index", "nsa-base", "1", "u"}).code, kFails);
  EXPECT_EQ(call({"bigo", "u^2", "u", "--sampled", "--kmin", "1", "--kmax", "30"}).code, kHolds);
}

TEST(Cli, JsonLine) {
  const Result r = call({"--json", "bigo", "u^2", "u"});
  EXPECT_EQ(r.code, kHolds);
  EXPECT_TRUE(has(r.out, "\"verdict\":\"holds\""));
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 1);
}

TEST(Cli, Laws) {
  EXPECT_EQ(call({"laws", "--trials", "0"}).code, kUsage);
  const Result r = call({"laws", "--trials", "10", "--seed", "3"});
  EXPECT_EQ(r.code, kHolds);
  EXPECT_TRUE(has(r.out, "fails as expected"));
  EXPECT_TRUE(has(r.out, "all laws hold"));
}

TEST(Cli, GenfunModerate) {
  const Result r = call({"genfun", "moderate", "delta()"});
  EXPECT_EQ(r.code, kHolds);
  EXPECT_TRUE(has(r.out, "N = 1 at alpha = 0"));
  EXPECT_TRUE(has(r.out, "N = 2 at alpha = 1"));
}

TEST(Cli, GenfunEqualAndNegligible) {
  EXPECT_EQ(call({"genfun", "equal", "dH()", "delta()"}).code, kHolds);
  EXPECT_EQ(call({"genfun", "equal", "delta()", "x*delta()"}).code, kFails);
  EXPECT_EQ(call({"genfun", "negligible", "u^10*x"}).code, kHolds);
  EXPECT_EQ(call({"genfun", "negligible", "delta()"}).code, kFails);
}

TEST(Cli, GenfunZeroTestWitness) {
  const Result r = call({"genfun", "zero-test", "x*delta()"});
  EXPECT_EQ(r.code, kFails);
  EXPECT_TRUE(has(r.out, "witness point"));
  EXPECT_EQ(call({"genfun", "--domain", "-1,1", "zero-test", "u^10*x"}).code, kHolds);
}

TEST(Cli, GenfunPointEval) {
  const Result r =
      call({"genfun", "--domain", "0,1", "point-eval", "smooth(x^2)", "0.3 + u", "--K", "0.2,0.45"});
  EXPECT_EQ(r.code, kHolds);
  EXPECT_TRUE(has(r.out, "leading behavior: 0.09"));
  EXPECT_EQ(call({"genfun", "--domain", "0,1", "point-eval", "x", "u^-1"}).code, kDataError);
}

TEST(Cli, Errors) {
  EXPECT_EQ(call({}).code, kUsage);
  EXPECT_EQ(call({"frobnicate"}).code, kUsage);
  const Result p = call({"genfun", "moderate", "x + * x"});
  EXPECT_EQ(p.code, kUsage);
  EXPECT_TRUE(has(p.err, "position 4"));
  EXPECT_EQ(call({"--index", "trivial", "genfun", "moderate", "delta()"}).code, kDataError);
  EXPECT_EQ(call({"--index", "bogus", "bigo", "u", "u"}).code, kUsage);
  EXPECT_EQ(call({"genfun", "--domain", "1", "moderate", "x"}).code, kUsage);
  EXPECT_EQ(call({"--help"}).code, 0);
}

TEST(Cli, Config) {
  const std::string path = ::testing::TempDir() + "soi_cli.toml";
  std::ofstream(path) << "index = \"full\"\n";
  const Result r = call({"--config", path, "bigo", "u^2", "u"});
  EXPECT_EQ(r.code, kHolds);
  EXPECT_TRUE(has(r.out, "full index set"));
  std::remove(path.c_str());
}

TEST(Cli, Deterministic) {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"bigo", "u*L", "u"}, {"laws", "--trials", "5"},
        {"genfun", "zero-test", "x*delta()"}, {"--index", "full", "bigo", "1", "u"}}) {
    const Result a = call(args), b = call(args);
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(a.out, b.out);
  }
}

}  // namespace
}  // namespace soi::cli
