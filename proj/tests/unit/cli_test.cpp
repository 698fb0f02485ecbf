#include <gtest/gtest.h>

#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"

namespace recur::cli {
namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(RECUR_EXAMPLES_DIR) + "/" + name; }

TEST(Cli, PathPrintsValue) {
  const auto r = call({"path", "--x", "ABRACADABRA", "--y", "AVRAKEHDABRA", "--n", "11"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_EQ(r.out, "8\n");
}

TEST(Cli, PathJsonEnvelope) {
  const auto r = call({"path", "--x", "ABRACADABRA", "--y", "ABRACADABRA", "--format", "json"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["tool"], "recur");
  EXPECT_TRUE(j.contains("version"));
  EXPECT_EQ(j["config"]["n"], 11);
  EXPECT_EQ(j["result"]["T"], 7);
}

TEST(Cli, ReturnAndWait) {
  EXPECT_EQ(call({"return", "--w", "ABRACADABRA"}).out, "7\n");
  EXPECT_EQ(call({"wait", "--x", "ABRA", "--stream", "ABRACADABRA"}).out, "7\n");
}

TEST(Cli, DivergenceCsv) {
  const auto r = call({"divergence", "--mu", data("b03.json"), "--nu", data("b07.json"), "--kmax",
                       "5"});
  ASSERT_EQ(r.code, kOk) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line.rfind("# recur ", 0), 0U);
  std::getline(lines, line);
  EXPECT_EQ(line, "k,E_k_log,E_k,rate_k,method");
  for (int i = 0; i < 3; ++i) std::getline(lines, line);
  EXPECT_EQ(line.rfind("3,", 0), 0U);
  const auto first = line.find(',');
  const auto second = line.find(',', first + 1);
  const auto third = line.find(',', second + 1);
  EXPECT_NEAR(std::stod(line.substr(second + 1, third - second - 1)), 0.074088, 1e-15) << line;
}

TEST(Cli, LawOracle) {
  const auto r = call({"law", "--mu", data("u.json"), "--nu", data("u.json"), "--n", "3",
                       "--oracle"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_LE(j["result"]["oracle"]["max_discrepancy"].get<double>(), 1e-15);
  const auto pmf = j["result"]["law"]["pmf"];
  EXPECT_DOUBLE_EQ(pmf[0].get<double>(), 0.25);
  EXPECT_DOUBLE_EQ(pmf[1].get<double>(), 0.375);
  EXPECT_DOUBLE_EQ(pmf[2].get<double>(), 0.375);
}

TEST(Cli, ValidateReports) {
  const auto ok = call({"validate", data("sticky3.json")});
  EXPECT_EQ(ok.code, kOk);
  EXPECT_EQ(ok.out.rfind("ok, stationary residual ", 0), 0U) << ok.out;
  EXPECT_NE(ok.out.find("entropy"), std::string::npos);

  const auto bad = call({"validate", data("bad_sum.json")});
  EXPECT_EQ(bad.code, kInvariant);
  EXPECT_EQ(bad.err.rfind("error invariant: ", 0), 0U);
  EXPECT_NE(bad.err.find("$.probs"), std::string::npos);

  const auto red = call({"validate", data("reducible.json")});
  EXPECT_EQ(red.code, kInvariant);
  EXPECT_NE(red.err.find("{c}"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(call({}).code, kUsage);
  EXPECT_EQ(call({"bogus"}).code, kUsage);
  EXPECT_EQ(call({"path", "--x", "AB", "--y", "ABC"}).code, kUsage);
  EXPECT_EQ(call({"divergence", "--mu", data("sticky3.json"), "--nu", data("b03.json")}).code,
            kUsage);
  EXPECT_EQ(call({"validate", data("missing.json")}).code, kUsage);
  const auto cap = call({"law", "--mu", data("u.json"), "--nu", data("u.json"), "--n", "40"});
  EXPECT_EQ(cap.code, kCapExceeded);
  EXPECT_EQ(cap.err.rfind("error cap_exceeded: ", 0), 0U) << cap.err;
}

TEST(Cli, ExperimentDeterministicAcrossWorkers) {
  const auto a = call({"--workers", "1", "experiment", "concentration", "--config",
                       data("concentration.json")});
  const auto b = call({"--workers", "4", "experiment", "concentration", "--config",
                       data("concentration.json")});
  ASSERT_EQ(a.code, kOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  const auto c = call({"experiment", "concentration", "--config", data("concentration.json"),
                       "--seed", "8"});
  EXPECT_NE(a.out, c.out);
}

TEST(Cli, LogBaseRescales) {
  const auto e = call({"rate", "--mu", data("u.json"), "--nu", data("u.json"), "--kmax", "4"});
  const auto two = call({"--log-base", "2", "rate", "--mu", data("u.json"), "--nu",
                         data("u.json"), "--kmax", "4"});
  ASSERT_EQ(two.code, kOk) << two.err;
  const auto je = nlohmann::json::parse(e.out);
  const auto j2 = nlohmann::json::parse(two.out);
  EXPECT_NEAR(j2["result"]["estimate"]["exact_rate"].get<double>(), 1.0, 1e-15);
  EXPECT_NEAR(je["result"]["estimate"]["exact_rate"].get<double>(), std::log(2.0), 1e-15);
}

}  // namespace
}  // namespace recur::cli
