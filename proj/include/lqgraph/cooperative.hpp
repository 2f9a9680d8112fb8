#pragma once

#include <Eigen/Dense>

#include "lqgraph/flow.hpp"
#include "lqgraph/graph.hpp"
#include "lqgraph/spectral.hpp"
#include "lqgraph/strategy.hpp"

namespace lqg {

/// Social-planner solution in the eigenbasis of A = M^T M, where row v of M
/// is the terminal functional of player v (M = -L without isolated
/// vertices). F(t) = cA (I + c(T-t)A)^{-1}.
class CoopKernel {
public:
  CoopKernel(Graph graph, EigenSystem eigen, double c, double T, double sigma, int steps);

  const Graph &graph() const { return graph_; }
  int n() const { return graph_.n(); }
  /// Eigenvalues kappa of A (clamped to be nonnegative) and eigenvectors.
  const EigenSystem &eigen() const { return eigen_; }
  double c() const { return c_; }
  double T() const { return T_; }
  double sigma() const { return sigma_; }
  int steps() const { return steps_; }

private:
  Graph graph_;
  EigenSystem eigen_;
  double c_, T_, sigma_;
  int steps_;
};

CoopKernel coop_kernel(const Graph &g, double c, double T, double sigma,
                       int steps = kDefaultSteps);

/// M^T M with rows of M the players' terminal functionals.
Eigen::MatrixXd coop_terminal_gram(const Graph &g);

/// c kappa / (1 + c(T-t) kappa).
Eigen::VectorXd coop_f_eigenvalues(const CoopKernel &k, double t);
Eigen::MatrixXd coop_f_matrix(const CoopKernel &k, double t);

/// h(t) = (sigma^2/2) sum_k log(1 + c(T-t) kappa_k).
double coop_h(const CoopKernel &k, double t);
/// Same quantity through a Cholesky log-determinant of I + c(T-t)A.
double coop_h_logdet(const CoopKernel &k, double t);

/// Per-player planner value (h(0) + x0^T F(0) x0 / 2) / n.
double coop_value(const CoopKernel &k, const Eigen::VectorXd &x0);
double coop_value(const CoopKernel &k);

/// Average player variance (1/n) Tr Cov(X(t)) under the planner's control,
/// Simpson in s for each eigenvalue.
double coop_variance(const CoopKernel &k, double t);

/// Feedback profile K(t) = F(t) on a grid of k.steps() intervals.
LinearProfile coop_profile(const CoopKernel &k);

/// Limit counterparts for a regular-graph limit measure (kappa = lambda^2).
double coop_limit_variance(const SpectralMeasure &mu, double c, double T, double sigma, double t,
                           int steps = kDefaultSteps);
double coop_limit_value(const SpectralMeasure &mu, double c, double T, double sigma);

} // namespace lqg
