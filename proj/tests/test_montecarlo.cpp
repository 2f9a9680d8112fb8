#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

#include "lqgraph/counter_rng.hpp"
#include "lqgraph/errors.hpp"
#include "lqgraph/montecarlo.hpp"

using namespace lqg;

namespace {

struct ThreadsEnv {
  explicit ThreadsEnv(const char *v) { setenv("LG_THREADS", v, 1); }
  ~ThreadsEnv() { unsetenv("LG_THREADS"); }
};

struct QuietWarnings {
  QuietWarnings() : prev(set_warning_sink([](const std::string &) {})) {}
  ~QuietWarnings() { set_warning_sink(prev); }
  WarningSink prev;
};

LinearProfile constant_diagonal(int n, double a, double T, int nodes) {
  return LinearProfile::diagonal(T, std::vector<Eigen::VectorXd>(nodes, Eigen::VectorXd::Constant(n, a)));
}

} // namespace

TEST(CounterRng, StandardNormalMoments) {
  const int m = 200000;
  double s1 = 0.0, s2 = 0.0;
  for (int k = 0; k < m; ++k) {
    const double z = rng::normal(99, k, 0, 0);
    s1 += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s1 / m, 0.0, 4.0 / std::sqrt(m));
  EXPECT_NEAR(s2 / m, 1.0, 4.0 * std::sqrt(2.0 / m));
  EXPECT_EQ(rng::normal(1, 2, 3, 4), rng::normal(1, 2, 3, 4));
  EXPECT_NE(rng::normal(1, 2, 3, 4), rng::normal(1, 2, 3, 5));
}

TEST(Simulate, DriftOnlyIsExactEulerAndHasZeroVariance) {
  const Graph g = complete_graph(3);
  const LinearProfile p = constant_diagonal(3, 0.5, 1.0, 11);
  SimConfig cfg;
  cfg.n_paths = 40;
  cfg.dt = 0.01;
  const Eigen::Vector3d x0(1.0, -2.0, 0.5);
  const PathEnsemble e = simulate(g, p, 0.0, cfg, x0);
  const EnsembleStats st = ensemble_stats(e, 1.0, {{0, 1}});
  EXPECT_EQ(st.variance.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(st.covariance[0], 0.0);
  const double euler = std::pow(1.0 - 0.005, 100);
  EXPECT_NEAR(st.mean(1), -2.0 * euler, 1e-13);
}

TEST(Simulate, WeakOrderOneOnTwoPlayers) {
  const Graph g = edge_list_graph(2, {{0, 1}});
  const EquilibriumKernel k = build_kernel(g, 1.0, 1.0, 1.0, 400);
  const LinearProfile p = equilibrium_profile(k);
  const Eigen::Vector2d x0(1.0, -1.0);
  const double exact = state_law(k, 1.0, x0).mean(0);
  std::vector<double> err;
  for (double dt : {0.1, 0.05, 0.025}) {
    SimConfig cfg;
    cfg.n_paths = 1;
    cfg.dt = dt;
    err.push_back(std::abs(simulate(g, p, 0.0, cfg, x0).states[0](0, 0) - exact));
  }
  for (int j = 0; j + 1 < 3; ++j) {
    const double slope = std::log2(err[j] / err[j + 1]);
    EXPECT_NEAR(slope, 1.0, 0.2);
  }
}

TEST(Simulate, SeedDeterminismAcrossThreadCounts) {
  const Graph g = cycle_graph(8);
  const LinearProfile p = mf_profile(g, 1.0, 1.0, 100);
  SimConfig cfg;
  cfg.n_paths = 700;
  cfg.dt = 0.02;
  cfg.seed = 5;
  cfg.record_times = {0.5, 1.0};
  Eigen::MatrixXd a, b;
  {
    ThreadsEnv env("1");
    a = simulate(g, p, 1.0, cfg).states[1];
  }
  {
    ThreadsEnv env("3");
    b = simulate(g, p, 1.0, cfg).states[1];
  }
  EXPECT_TRUE(a == b);
  cfg.seed = 6;
  EXPECT_FALSE(simulate(g, p, 1.0, cfg).states[1] == a);
}

TEST(Simulate, MeanFieldIidVariance) {
  const Graph g = cycle_graph(10);
  const double c = 2.0, T = 1.0, sigma = 1.0;
  SimConfig cfg;
  cfg.n_paths = 4000;
  cfg.dt = 1.0 / 200;
  cfg.seed = 17;
  const PathEnsemble e = simulate(g, mf_profile(g, c, T, 200), sigma, cfg);
  const EnsembleStats st = ensemble_stats(e, T, {{0, 1}, {0, 5}});
  const double v = sigma * sigma * T / (1 + c * T);
  EXPECT_LE(std::abs(st.pooled_variance - v), 3 * st.pooled_variance_se + 0.01 * v);
  for (std::size_t q = 0; q < 2; ++q)
    EXPECT_LE(std::abs(st.covariance[q]), 3 * st.covariance_se[q]);
}

TEST(Simulate, EquilibriumCompleteGraphMoments) {
  const EquilibriumKernel k = build_kernel(complete_graph(10), 1.0, 1.0, 1.0, 500);
  SimConfig cfg;
  cfg.n_paths = 3000;
  cfg.dt = 1.0 / 250;
  cfg.seed = 3;
  const PathEnsemble e = simulate(k.graph(), equilibrium_profile(k), 1.0, cfg);
  const EnsembleStats st = ensemble_stats(e, 1.0, {{0, 1}, {2, 7}});
  const GaussianLaw law = state_law(k, 1.0);
  for (int v = 0; v < 10; ++v) {
    EXPECT_LE(std::abs(st.mean(v)), 3.5 * st.mean_se(v));
    EXPECT_LE(std::abs(st.variance(v) - law.covariance(v, v)), 3.5 * st.variance_se(v) + 0.01);
  }
  EXPECT_LE(std::abs(st.covariance[1] - law.covariance(2, 7)), 3.5 * st.covariance_se[1] + 0.01);
}

TEST(Simulate, Errors) {
  const Graph g = cycle_graph(4);
  const LinearProfile p = mf_profile(g, 1.0, 1.0, 10);
  SimConfig cfg;
  cfg.n_paths = 4;
  cfg.dt = 0.3;
  EXPECT_THROW(simulate(g, p, 1.0, cfg), ParameterError);
  cfg.dt = 0.1;
  cfg.record_times = {0.25};
  EXPECT_THROW(simulate(g, p, 1.0, cfg), ParameterError);
  cfg.record_times = {0.5};
  const PathEnsemble e = simulate(g, p, 1.0, cfg);
  EXPECT_THROW(ensemble_stats(e, 1.0), ParameterError);
  EXPECT_THROW(ensemble_stats(e, 0.5, {{0, 4}}), ParameterError);
  EXPECT_THROW(simulate(cycle_graph(5), p, 1.0, cfg), ParameterError);
}

TEST(Simulate, DivergenceIsReported) {
  const Graph g = complete_graph(2);
  SimConfig cfg;
  cfg.n_paths = 3;
  cfg.dt = 0.001;
  const LinearProfile p = constant_diagonal(2, -1e6, 1.0, 3);
  try {
    simulate(g, p, 1.0, cfg, Eigen::Vector2d(1.0, 1.0));
    FAIL();
  } catch (const NumericError &err) {
    EXPECT_NE(std::string(err.what()).find("path 0"), std::string::npos);
  }
}

TEST(Jackknife, MatchesIidStandardError) {
  const Graph g = edge_list_graph(1, {});
  SimConfig cfg;
  cfg.n_paths = 20000;
  cfg.dt = 0.5;
  cfg.seed = 11;
  const PathEnsemble e = simulate(g, constant_diagonal(1, 0.0, 1.0, 3), 1.0, cfg);
  const EnsembleStats st = ensemble_stats(e, 1.0);
  // X(1) ~ N(0, 1): SE of the mean 1/sqrt(N), of the variance sqrt(2/N).
  EXPECT_NEAR(st.mean_se(0), 1.0 / std::sqrt(20000.0), 0.25 / std::sqrt(20000.0));
  EXPECT_NEAR(st.variance_se(0), std::sqrt(2.0 / 20000), 0.25 * std::sqrt(2.0 / 20000));
}

TEST(Concentration, CompleteGraph) {
  const EquilibriumKernel k = build_kernel(complete_graph(100), 1.0, 1.0, 1.0, 500);
  SimConfig cfg;
  cfg.n_paths = 1000;
  cfg.dt = 1.0 / 100;
  cfg.seed = 2;
  const PathEnsemble e = simulate(k.graph(), equilibrium_profile(k), 1.0, cfg);
  for (TestFunction h : {TestFunction::tanh, TestFunction::clipped_identity, TestFunction::cosine}) {
    const ConcentrationResult r = empirical_measure_test(e, k, 1.0, h);
    EXPECT_TRUE(r.passed) << to_string(h);
    EXPECT_LE(r.bound, 1.0 / 100 * 2);
  }
}

TEST(Concentration, PoincareBoundDecreasesOnCycles) {
  QuietWarnings quiet;
  double prev = 1e9;
  for (int n : {50, 100, 200}) {
    const double b = poincare_bound(build_kernel(cycle_graph(n), 1.0, 1.0, 1.0, 400), 1.0);
    EXPECT_LT(b, prev);
    prev = b;
  }
}

TEST(Concentration, TestFunctions) {
  EXPECT_EQ(apply_test_function(TestFunction::clipped_identity, 3.0), 1.0);
  EXPECT_EQ(apply_test_function(TestFunction::clipped_identity, -0.2), -0.2);
  EXPECT_EQ(apply_test_function(TestFunction::cosine, 0.0), 1.0);
  EXPECT_STREQ(to_string(TestFunction::tanh), "tanh");
}
