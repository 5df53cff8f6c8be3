#include <gtest/gtest.h>

#include <cli.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;
using junction_hj::cli::run;

std::string data(const std::string& name) {
  return std::string(JUNCTION_HJ_TEST_DATA) + "/" + name;
}

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("junction_hj_cli_" + name);
}

fs::path write_scenario(const std::string& name, const std::string& body) {
  const fs::path p = temp_file(name);
  std::ofstream(p) << body;
  return p;
}

TEST(Cli, ActionPrintsJson) {
  const auto r = call({"action", "--scenario", data("t2_sym.json"), "--from", "1:0.5",
                       "--to", "2:0.5", "--t0", "0", "--t1", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["value"].get<double>(), 0.0, 1e-14);
  EXPECT_EQ(j["regime"], "implicit");
  EXPECT_NEAR(j["tau1"].get<double>(), 0.5, 1e-12);
  EXPECT_NEAR(j["tau2"].get<double>(), 0.5, 1e-12);
}

TEST(Cli, ActionStraightHasNullTimes) {
  const auto r = call({"action", "--scenario", data("t2_asym.json"), "--from", "2:0.2",
                       "--to", "2:0.2", "--t0", "0", "--t1", "1"});
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["regime"], "straight");
  EXPECT_TRUE(j["tau1"].is_null());
  EXPECT_NEAR(j["value"].get<double>(), 0.5, 1e-12);
}

TEST(Cli, SolveWritesDeterministicCsv) {
  const fs::path a = temp_file("solve_a.csv");
  const fs::path b = temp_file("solve_b.csv");
  ASSERT_EQ(call({"solve", "--scenario", data("t2_asym.json"), "--out", a.string()}).code, 0);
  ASSERT_EQ(call({"solve", "--scenario", data("t2_asym.json"), "--out", b.string()}).code, 0);
  const std::string text = slurp(a);
  EXPECT_EQ(text, slurp(b));
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,branch,x,u");
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 6), "0,0,0,");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows + 1, 5u * (1 + 2 * 20));
}

TEST(Cli, TrafficWritesDensitiesAndFlux) {
  const fs::path out = temp_file("traffic.csv");
  const auto r = call({"traffic", "--scenario", data("riemann_03_09.json"), "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(out).substr(0, 12), "t,road,X,rho");
  const fs::path flux = temp_file("traffic_flux.csv");
  std::istringstream in(slurp(flux));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,junction_flux");
  int checked = 0;
  while (std::getline(in, line)) {
    const double t = std::stod(line.substr(0, line.find(',')));
    const double f = std::stod(line.substr(line.find(',') + 1));
    if (t >= 0.2) {
      EXPECT_NEAR(f, 0.09, 1e-2);
      ++checked;
    }
  }
  EXPECT_GT(checked, 0);
}

TEST(Cli, VerifyPassesOnAsymmetricScenario) {
  const auto r = call({"verify", "--scenario", data("t2_asym.json")});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("PASS oracle"), std::string::npos);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST(Cli, VerifySingleSuiteAndFailure) {
  auto r = call({"verify", "--scenario", data("t2_sym.json"), "--suite", "k-identities"});
  EXPECT_EQ(r.code, 0);
  // An impossible tolerance must make verify fail.
  r = call({"verify", "--scenario", data("t2_asym.json"), "--suite", "dpp", "--dpp-tol", "-1"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("FAIL"), std::string::npos);
  r = call({"verify", "--scenario", data("t2_sym.json"), "--suite", "nope"});
  EXPECT_EQ(r.code, 3);
}

TEST(Cli, OracleMirrorsAction) {
  const auto r = call({"oracle", "action", "--scenario", data("t2_asym.json"), "--from", "2:0.05",
                       "--to", "2:0.05", "--n-tau", "500"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(nlohmann::json::parse(r.out)["value"].get<double>(), 0.3207107, 1e-5);
  const fs::path out = temp_file("oracle_solve.csv");
  const fs::path sc = write_scenario("oracle_small.json", R"({
    "branches": [
      {"lagrangian": {"type": "quadratic", "a": 0.25, "b": -1, "c": 0}},
      {"lagrangian": {"type": "quadratic", "a": 0.25, "b": 1, "c": 0}}],
    "grid": {"t": [0, 1, 2], "x_per_branch": [1, 3]}})");
  ASSERT_EQ(call({"oracle", "solve", "--scenario", sc.string(), "--out", out.string(),
                  "--n-tau", "50", "--n-y", "50"}).code, 0);
  EXPECT_EQ(slurp(out).substr(0, 11), "t,branch,x,");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(call({}).code, 2);
  EXPECT_EQ(call({"action", "--bogus"}).code, 2);
  EXPECT_EQ(call({"solve", "--scenario", data("t2_sym.json")}).code, 2);
  EXPECT_EQ(call({"--help"}).code, 0);

  const auto missing = call({"action", "--scenario", "/nonexistent.json", "--from", "1:1",
                             "--to", "1:1"});
  EXPECT_EQ(missing.code, 3);

  const fs::path both = write_scenario("both.json", R"({"branches": [], "traffic": {}})");
  auto r = call({"action", "--scenario", both.string(), "--from", "1:1", "--to", "1:1"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("exactly one"), std::string::npos);

  const fs::path badsum = write_scenario("badsum.json", R"({"traffic": {
    "incoming": [{"vmax": 1, "rhomax": 1, "gamma": 0.5}],
    "outgoing": [{"vmax": 1, "rhomax": 1, "gamma": 1}]}})");
  r = call({"action", "--scenario", badsum.string(), "--from", "1:1", "--to", "1:1"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("sum"), std::string::npos);

  const fs::path badgrid = write_scenario("badgrid.json", R"({
    "branches": [{"lagrangian": {"type": "quadratic", "a": 0.5, "b": 0, "c": 0}}],
    "grid": {"t": [0, 1, 1], "x_per_branch": [1, 5]}})");
  EXPECT_EQ(call({"action", "--scenario", badgrid.string(), "--from", "1:1", "--to", "1:1"}).code, 3);

  const fs::path notjson = write_scenario("notjson.json", "{ nope");
  EXPECT_EQ(call({"action", "--scenario", notjson.string(), "--from", "1:1", "--to", "1:1"}).code, 3);

  r = call({"action", "--scenario", data("t2_sym.json"), "--from", "1:1", "--to", "1:1",
            "--t0", "2", "--t1", "1"});
  EXPECT_EQ(r.code, 3);
  r = call({"action", "--scenario", data("t2_sym.json"), "--from", "7:1", "--to", "1:1"});
  EXPECT_EQ(r.code, 3);
}

}  // namespace
