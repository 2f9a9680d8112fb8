#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lqgraph/equilibrium.hpp"
#include "lqgraph/graph.hpp"
#include "lqgraph/strategy.hpp"

namespace lqg {

struct SimConfig {
  int n_paths = 10000;
  double dt = 1.0 / 500.0;
  std::uint64_t seed = 0;
  /// Times to record; must lie on the dt grid. Empty means {T}.
  std::vector<double> record_times;
};

struct PathEnsemble {
  std::vector<double> times;
  /// states[k](p, v) = X_v(times[k]) on path p.
  std::vector<Eigen::MatrixXd> states;
  LinearProfile::Tag profile_tag = LinearProfile::Tag::custom;
  SimConfig config;
  Eigen::VectorXd x0;

  int n() const { return states.empty() ? 0 : static_cast<int>(states.front().cols()); }
  /// Index of the recorded time t; throws ParameterError when unrecorded.
  int time_index(double t) const;
};

/// Euler-Maruyama for dX = -K(t) X dt + sigma dW with Gaussian increments
/// keyed by (seed, path, player, step), so ensembles are bit-identical
/// for any thread count.
PathEnsemble simulate(const Graph &g, const LinearProfile &prof, double sigma,
                      const SimConfig &cfg, const Eigen::VectorXd &x0);
PathEnsemble simulate(const Graph &g, const LinearProfile &prof, double sigma,
                      const SimConfig &cfg);

struct EnsembleStats {
  Eigen::VectorXd mean;
  Eigen::VectorXd mean_se;
  Eigen::VectorXd variance;
  Eigen::VectorXd variance_se;
  std::vector<std::pair<int, int>> pairs;
  std::vector<double> covariance;
  std::vector<double> covariance_se;
  /// (1/n) sum_v variance_v with its standard error.
  double pooled_variance = 0.0;
  double pooled_variance_se = 0.0;
};

/// Unbiased sample moments at a recorded time; standard errors from a block
/// jackknife with min(100, n_paths) contiguous groups.
EnsembleStats ensemble_stats(const PathEnsemble &e, double t,
                             const std::vector<std::pair<int, int>> &pairs = {});

enum class TestFunction { tanh, clipped_identity, cosine };

const char *to_string(TestFunction h);
double apply_test_function(TestFunction h, double x);

struct ConcentrationResult {
  double sample_variance;
  double sample_variance_se;
  /// (1/n^2) sum_{j,k} |Sigma_jk| from the analytic state law.
  double bound;
  bool passed;
};

/// Across-path variance of (1/n) sum_v h(X_v(t)) against the
/// Gaussian-Poincare bound; passes when variance <= bound + 3 SE.
ConcentrationResult empirical_measure_test(const PathEnsemble &e, const EquilibriumKernel &k,
                                           double t, TestFunction h);

/// (1/n^2) sum_{j,k} |Sigma_jk(t)|.
double poincare_bound(const EquilibriumKernel &k, double t);

} // namespace lqg
