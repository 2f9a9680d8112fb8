#include "lqgraph/cooperative.hpp"

#include <algorithm>
#include <cmath>

#include "lqgraph/errors.hpp"

namespace lqg {

namespace {

void check_time(double t, double T) {
  if (!(t >= -1e-12 * T && t <= T * (1.0 + 1e-12)))
    throw ParameterError("cooperative: t outside [0,T]");
}

// sigma^2 int_0^t ((1 + c(T-t) kappa) / (1 + c(T-s) kappa))^2 ds.
double coop_mode_variance(double kappa, double c, double T, double sigma, double t, int m) {
  if (t <= 0.0)
    return 0.0;
  const double num = 1.0 + c * (T - t) * kappa;
  return sigma * sigma * simpson(
                             [&](double s) {
                               const double r = num / (1.0 + c * (T - s) * kappa);
                               return r * r;
                             },
                             0.0, t, m);
}

int simpson_intervals(double t, double T, int steps) {
  int m = static_cast<int>(std::ceil(steps * t / T - 1e-9));
  return std::max(2, m + (m % 2));
}

} // namespace

CoopKernel::CoopKernel(Graph graph, EigenSystem eigen, double c, double T, double sigma,
                       int steps)
    : graph_(std::move(graph)), eigen_(std::move(eigen)), c_(c), T_(T), sigma_(sigma),
      steps_(steps) {}

Eigen::MatrixXd coop_terminal_gram(const Graph &g) {
  Eigen::MatrixXd m(g.n(), g.n());
  for (int v = 0; v < g.n(); ++v)
    m.row(v) = terminal_functional(g, v).transpose();
  return m.transpose() * m;
}

CoopKernel coop_kernel(const Graph &g, double c, double T, double sigma, int steps) {
  if (!(c > 0.0) || !(T > 0.0) || !(sigma > 0.0))
    throw ParameterError("coop_kernel: c, T, sigma must be positive");
  if (steps < 2)
    throw ParameterError("coop_kernel: need at least two steps");
  if (steps % 2 != 0)
    ++steps;
  Eigen::MatrixXd a = coop_terminal_gram(g);
  a = 0.5 * (a + a.transpose()).eval();
  EigenSystem es = eigendecompose(a, true);
  const double tol = 1e-9 * std::max(1.0, es.values.cwiseAbs().maxCoeff());
  if (es.values.minCoeff() < -tol)
    throw NumericError("coop_kernel: terminal Gram matrix is not positive semidefinite");
  es.values = es.values.cwiseMax(0.0);
  return CoopKernel(g, std::move(es), c, T, sigma, steps);
}

Eigen::VectorXd coop_f_eigenvalues(const CoopKernel &k, double t) {
  check_time(t, k.T());
  const double tau = std::max(k.T() - t, 0.0);
  const Eigen::ArrayXd kap = k.eigen().values.array();
  return (k.c() * kap / (1.0 + k.c() * tau * kap)).matrix();
}

Eigen::MatrixXd coop_f_matrix(const CoopKernel &k, double t) {
  const auto &v = k.eigen().vectors;
  return v * coop_f_eigenvalues(k, t).asDiagonal() * v.transpose();
}

double coop_h(const CoopKernel &k, double t) {
  check_time(t, k.T());
  const double tau = std::max(k.T() - t, 0.0);
  const double s = (k.c() * tau * k.eigen().values.array()).log1p().sum();
  return 0.5 * k.sigma() * k.sigma() * s;
}

double coop_h_logdet(const CoopKernel &k, double t) {
  check_time(t, k.T());
  const double tau = std::max(k.T() - t, 0.0);
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(k.n(), k.n()) +
                      k.c() * tau * coop_terminal_gram(k.graph());
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success)
    throw NumericError("coop_h_logdet: Cholesky failed");
  const double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  return 0.5 * k.sigma() * k.sigma() * logdet;
}

double coop_value(const CoopKernel &k, const Eigen::VectorXd &x0) {
  if (x0.size() != k.n())
    throw ParameterError("coop_value: x0 dimension mismatch");
  const double quad = 0.5 * x0.dot(coop_f_matrix(k, 0.0) * x0);
  return (coop_h(k, 0.0) + quad) / k.n();
}

double coop_value(const CoopKernel &k) { return coop_value(k, Eigen::VectorXd::Zero(k.n())); }

double coop_variance(const CoopKernel &k, double t) {
  check_time(t, k.T());
  const int m = simpson_intervals(t, k.T(), k.steps());
  double s = 0.0;
  for (Eigen::Index j = 0; j < k.eigen().values.size(); ++j)
    s += coop_mode_variance(k.eigen().values(j), k.c(), k.T(), k.sigma(), t, m);
  return s / k.n();
}

LinearProfile coop_profile(const CoopKernel &k) {
  std::vector<Eigen::VectorXd> nodes(k.steps() + 1);
  for (int j = 0; j <= k.steps(); ++j)
    nodes[j] = coop_f_eigenvalues(k, k.T() * j / k.steps());
  return LinearProfile::spectral(k.T(), k.eigen().vectors, std::move(nodes),
                                 LinearProfile::Tag::cooperative);
}

double coop_limit_variance(const SpectralMeasure &mu, double c, double T, double sigma, double t,
                           int steps) {
  check_time(t, T);
  const int m = simpson_intervals(t, T, steps);
  return integrate(mu, [&](double l) { return coop_mode_variance(l * l, c, T, sigma, t, m); });
}

double coop_limit_value(const SpectralMeasure &mu, double c, double T, double sigma) {
  return 0.5 * sigma * sigma * integrate(mu, [&](double l) { return std::log1p(c * T * l * l); });
}

} // namespace lqg
