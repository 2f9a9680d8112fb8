#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "lqgraph/io.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "lqgraph");
  std::vector<const char *> argv;
  for (const auto &a : args)
    argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = lqg::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string tmp(const std::string &name) { return std::string(LQG_TEST_TMPDIR) + "/" + name; }

std::string slurp(const std::string &path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

lqg::CsvTable parse_csv(const std::string &text) {
  std::istringstream in(text);
  return lqg::read_csv(in);
}

lqg::json body_json(const std::string &text) { return lqg::json::parse(text); }

} // namespace

TEST(Cli, ValueOnCompleteGraph) {
  const Result r = run({"value", "--graph", "complete:300", "--c", "1", "--T", "1", "--sigma", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = body_json(r.out);
  EXPECT_NEAR(j["value"].get<double>(), 0.5 * std::log(2.0), 0.01);
  EXPECT_NEAR(j["spectral_identity"].get<double>(), j["value"].get<double>(), 1e-12);
  EXPECT_EQ(j["config"]["graph"]["kind"], "complete");
  EXPECT_EQ(j["config"]["command"], "value");
}

TEST(Cli, VarianceCurveDirac) {
  const Result r = run({"variance-curve", "--measure", "dirac", "--t", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto tab = parse_csv(r.out);
  ASSERT_EQ(tab.rows.size(), 1u);
  EXPECT_NEAR(tab.values("value")[0], 0.5, 1e-12);
  EXPECT_EQ(tab.config["measure"], "dirac");
}

TEST(Cli, SpectrumCycleFour) {
  const Result r = run({"spectrum", "--graph", "cycle:4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ev = parse_csv(r.out).values("eigenvalue");
  ASSERT_EQ(ev.size(), 4u);
  const double expected[] = {-2, -1, -1, 0};
  for (int k = 0; k < 4; ++k)
    EXPECT_NEAR(ev[k], expected[k], 1e-12);
}

TEST(Cli, ExitCodes) {
  Result r = run({"value", "--graph", "er:5:0:1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.err.rfind("error: kind=domain message=", 0), 0u) << r.err;
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
  r = run({"value", "--graph", "cycle:x"});
  EXPECT_EQ(r.code, 1);
  r = run({"value", "--graph", "cycle:5", "--c", "-1"});
  EXPECT_EQ(r.code, 1);
  r = run({"bogus"});
  EXPECT_EQ(r.code, 1);
  r = run({"value", "--measure", "cycle", "--steps", "10"});
  EXPECT_EQ(r.code, 1);
  r = run({"spectrum", "--graph", "regular:12:10:1"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("kind=generation"), std::string::npos);
  r = run({"value", "--config", tmp("missing.json")});
  EXPECT_EQ(r.code, 1);
}

TEST(Cli, ConfigFileOverridesFlags) {
  const std::string path = tmp("cli_config.json");
  {
    std::ofstream f(path);
    f << R"({"measure": "dirac", "c": 2.0, "t": 0.5})";
  }
  const Result r = run({"variance-curve", "--measure", "cycle", "--c", "7", "--config", path});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto tab = parse_csv(r.out);
  EXPECT_EQ(tab.config["c"], 2.0);
  // Dense formula: t (1 + c(T-t)) / (1 + cT) with c = 2.
  EXPECT_NEAR(tab.values("value")[0], 0.5 * 2.0 / 3.0, 1e-12);
}

TEST(Cli, ConfigGraphObject) {
  const std::string path = tmp("cli_graph.json");
  {
    std::ofstream f(path);
    f << R"({"graph": {"kind": "edge_list", "n": 3, "edges": [[1,2],[2,3],[3,1]]}})";
  }
  const Result r = run({"spectrum", "--config", path});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ev = parse_csv(r.out).values("eigenvalue");
  EXPECT_NEAR(ev[0], -1.5, 1e-12);
}

TEST(Cli, FiguresAreByteStableAndWriteFiles) {
  for (const char *fig : {"fig1", "fig2", "fig3"}) {
    const std::string a = tmp(std::string(fig) + "_a.csv"), b = tmp(std::string(fig) + "_b.csv");
    ASSERT_EQ(run({fig, "--t-grid", "11", "--out", a}).code, 0);
    ASSERT_EQ(run({fig, "--t-grid", "11", "--out", b}).code, 0);
    const std::string ta = slurp(a);
    EXPECT_FALSE(ta.empty());
    EXPECT_EQ(ta, slurp(b)) << fig;
    EXPECT_EQ(ta.rfind("# config: ", 0), 0u);
    EXPECT_EQ(parse_csv(ta).rows.size(), 11u);
  }
}

TEST(Cli, Fig1Header) {
  const Result r = run({"fig1", "--t-grid", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto tab = parse_csv(r.out);
  const std::vector<std::string> h = {"t",       "dense_c0.5", "cycle_c0.5", "dense_c1", "cycle_c1",
                                      "dense_c2", "cycle_c2",   "dense_c5",   "cycle_c5"};
  EXPECT_EQ(tab.header, h);
}

TEST(Cli, SolveFCsv) {
  const Result r = run({"solve-f", "--measure", "cycle", "--steps", "4000", "--t-grid", "0:1:5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto tab = parse_csv(r.out);
  EXPECT_EQ(tab.header, (std::vector<std::string>{"t", "f"}));
  EXPECT_EQ(tab.values("f")[0], 0.0);
}

TEST(Cli, NashAuditMeanField) {
  const Result r =
      run({"nash-audit", "--graph", "cycle:12", "--profile", "mean_field", "--steps", "400"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = body_json(r.out);
  EXPECT_TRUE(j["all_satisfied"].get<bool>());
  ASSERT_EQ(j["vertices"].size(), 12u);
  EXPECT_EQ(j["vertices"][0]["vertex"], 1);
}

TEST(Cli, NashAuditEquilibrium) {
  const Result r = run({"nash-audit", "--graph", "cycle:6"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(body_json(r.out)["all_satisfied"].get<bool>());
}

TEST(Cli, SimulateWithDump) {
  const std::string dump = tmp("cli_dump.csv");
  const Result r = run({"simulate", "--graph", "complete:4", "--paths", "50", "--dt", "0.01",
                        "--seed", "9", "--steps", "200", "--dump", dump});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = body_json(r.out);
  EXPECT_EQ(j["records"].size(), 1u);
  EXPECT_EQ(j["config"]["seed"], 9);
  const std::string raw = slurp(dump);
  EXPECT_EQ(raw.rfind("path,player,t,x\n", 0), 0u);
  EXPECT_EQ(std::count(raw.begin(), raw.end(), '\n'), 1 + 50 * 4);
  EXPECT_EQ(run({"simulate", "--graph", "complete:4", "--paths", "50", "--dt", "0.01", "--seed",
                 "9", "--steps", "200"})
                .out,
            r.out);
}

TEST(Cli, CoopCurve) {
  const Result r = run({"coop", "--graph", "cycle:4", "--t", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto tab = parse_csv(r.out);
  EXPECT_GT(tab.values("value")[0], 0.0);
  const Result v = run({"value", "--graph", "cycle:4"});
  EXPECT_NEAR(body_json(v.out)["cooperative_value"].get<double>(),
              (2 * std::log(2.0) + std::log(5.0)) / 8, 1e-9);
}
