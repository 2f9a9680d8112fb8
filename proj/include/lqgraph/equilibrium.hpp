#pragma once

#include <Eigen/Dense>

#include "lqgraph/flow.hpp"
#include "lqgraph/graph.hpp"
#include "lqgraph/spectral.hpp"

namespace lqg {

struct GaussianLaw {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  /// Covariance eigenvalues in the Laplacian eigenbasis (same ordering).
  Eigen::VectorXd cov_eigenvalues;
};

/// Spectral data of the Nash equilibrium on a regular graph. All matrix
/// functions of L are evaluated as scalar functions of its eigenvalues.
class EquilibriumKernel {
public:
  EquilibriumKernel(Graph graph, EigenSystem eigen, FlockingSchedule schedule, double sigma);

  const Graph &graph() const { return graph_; }
  int n() const { return graph_.n(); }
  int degree() const { return graph_.degree(0); }
  const EigenSystem &eigen() const { return eigen_; }
  const FlockingSchedule &schedule() const { return schedule_; }
  double c() const { return schedule_.c(); }
  double T() const { return schedule_.T(); }
  double sigma() const { return sigma_; }
  TransitiveHint transitive_status() const { return graph_.hint(); }

private:
  Graph graph_;
  EigenSystem eigen_;
  FlockingSchedule schedule_;
  double sigma_;
};

/// Throws DomainError for irregular graphs or isolated vertices. Warns when
/// the graph is not known to be transitive.
EquilibriumKernel build_kernel(const Graph &g, double c, double T, double sigma,
                               int steps = kDefaultSteps);

/// rho_k(t) = -f'(T-t) lambda_k / (1 - f(T-t) lambda_k).
Eigen::VectorXd p_eigenvalues(const EquilibriumKernel &k, double t);
/// P(t) = -f'(T-t) L (I - f(T-t) L)^{-1}.
Eigen::MatrixXd p_matrix(const EquilibriumKernel &k, double t);

/// -(row i of P(t)) x.
double equilibrium_control(const EquilibriumKernel &k, int i, double t,
                           const Eigen::VectorXd &x);

/// int_{T-t}^{T} g(f(u)) du by composite Simpson on the schedule grid.
double schedule_integral(const FlockingSchedule &s, double t,
                         const std::function<double(double)> &g);

/// Per-eigenvalue covariance sigma^2 (1 - f(T-t) l)^2 int_0^t (1 - f(T-s) l)^{-2} ds.
Eigen::VectorXd covariance_eigenvalues(const FlockingSchedule &s, const Eigen::VectorXd &lambda,
                                       double sigma, double t);

/// Law of the equilibrium state at time t started from x0.
GaussianLaw state_law(const EquilibriumKernel &k, double t, const Eigen::VectorXd &x0);
GaussianLaw state_law(const EquilibriumKernel &k, double t);

/// Var(X_i(t)) for x0 = 0: the average of the covariance eigenvalues.
double player_variance(const EquilibriumKernel &k, double t);

/// |P(0) x0|^2 / (2 Tr P(0)) - (sigma^2/2) log(Tr P(0) / (n f'(T))).
double game_value(const EquilibriumKernel &k, const Eigen::VectorXd &x0);
double game_value(const EquilibriumKernel &k);
/// -(sigma^2/2) log int -lambda/(1 - f(T) lambda) dmu_G, evaluated from the
/// spectrum directly.
double game_value_spectral(const EquilibriumKernel &k);

/// V_mu(t) = sigma^2 int_0^t int ((1 - l f(T-t)) / (1 - l f(T-s)))^2 dmu ds.
/// Throws ParameterError when `schedule` was not built from `mu`.
double limit_variance(const SpectralMeasure &mu, const FlockingSchedule &schedule, double sigma,
                      double t);
/// sigma^2 t (1 + c(T-t)) / (1 + cT).
double dense_limit_variance(double c, double T, double sigma, double t);
/// -(sigma^2/2) log int -l/(1 - l f(T)) dmu.
double limit_value(const SpectralMeasure &mu, const FlockingSchedule &schedule, double sigma);
/// V''(0) = -2 sigma^2 f'(T)^2 / (c Q(f(T))).
double limit_variance_second_derivative_at_zero(const FlockingSchedule &schedule, double sigma);

/// F^i(t) = P e_i e_i^T P / (Tr P / n).
Eigen::MatrixXd f_matrix(const EquilibriumKernel &k, int i, double t);

/// Max-norm residual of the coupled Riccati system for player i at an
/// interior time, with the time derivative from a fourth-order central
/// difference at the schedule step. Throws DomainError when the kernel is
/// known not to be transitive.
double riccati_residual(const EquilibriumKernel &k, int i, double t);
/// ||F^i(T) - c L e_i e_i^T L||_max.
double riccati_boundary_residual(const EquilibriumKernel &k, int i);

/// 2 sigma^2 t gamma^d (1 + d(1 - gamma)) / (delta (1 - gamma)^2), gamma = cT/(1+cT),
/// d the graph distance; 0 for unreachable pairs.
double covariance_bound(const EquilibriumKernel &k, int u, int v, double t);
double covariance_bound_value(double sigma, double c, double T, int degree, int distance,
                              double t);

} // namespace lqg
