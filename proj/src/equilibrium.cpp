#include "lqgraph/equilibrium.hpp"

#include <algorithm>
#include <cmath>

#include "lqgraph/errors.hpp"

namespace lqg {

namespace {

void check_time(double t, double T, const char *who) {
  if (!(t >= -1e-12 * T && t <= T * (1.0 + 1e-12)))
    throw ParameterError(std::string(who) + ": t outside [0,T]");
}

// Simpson nodes on [T-t, T] in the schedule variable u, with the values of
// f at those nodes. Grid-aligned t reuses schedule nodes (halving the step
// when the interval count is odd).
struct SimpsonGrid {
  Eigen::VectorXd f;
  Eigen::VectorXd w;
};

SimpsonGrid simpson_grid(const FlockingSchedule &s, double t) {
  const double T = s.T(), h = s.step();
  const double a = std::max(T - t, 0.0);
  int m = 0;
  bool on_nodes = false;
  if (const int ka = s.node_index(a); ka >= 0) {
    const int count = s.steps() - ka;
    on_nodes = count % 2 == 0;
    m = on_nodes ? count : 2 * count;
  } else {
    m = static_cast<int>(std::ceil(t / h - 1e-9));
    m = std::max(2, m + (m % 2));
  }
  SimpsonGrid g{Eigen::VectorXd(m + 1), Eigen::VectorXd(m + 1)};
  const double du = (T - a) / m;
  for (int j = 0; j <= m; ++j) {
    const double u = a + j * du;
    g.f(j) = (j == m) ? s.f_nodes()(s.steps()) : s.f(std::min(u, T));
    g.w(j) = (j == 0 || j == m) ? 1.0 : (j % 2 ? 4.0 : 2.0);
  }
  g.w *= du / 3.0;
  return g;
}

double variance_mode(const SimpsonGrid &g, double f_now, double lambda) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < g.f.size(); ++j) {
    const double r = (1.0 - f_now * lambda) / (1.0 - g.f(j) * lambda);
    s += g.w(j) * r * r;
  }
  return s;
}

Eigen::MatrixXd from_spectrum(const EigenSystem &es, const Eigen::VectorXd &values) {
  return es.vectors * values.asDiagonal() * es.vectors.transpose();
}

} // namespace

EquilibriumKernel::EquilibriumKernel(Graph graph, EigenSystem eigen, FlockingSchedule schedule,
                                     double sigma)
    : graph_(std::move(graph)), eigen_(std::move(eigen)), schedule_(std::move(schedule)),
      sigma_(sigma) {}

EquilibriumKernel build_kernel(const Graph &g, double c, double T, double sigma, int steps) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw ParameterError("build_kernel: sigma must be positive");
  const DegreeStats ds = degree_stats(g);
  if (ds.min_degree == 0)
    throw DomainError("build_kernel: graph has isolated vertices");
  if (!ds.is_regular)
    throw DomainError("build_kernel: graph is not regular");
  Graph graph = g;
  if (graph.hint() == TransitiveHint::unknown)
    graph = graph.with_hint(verify_transitive(graph));
  if (graph.hint() == TransitiveHint::unknown || graph.hint() == TransitiveHint::not_transitive)
    warn(std::string("build_kernel: graph is ") + to_string(graph.hint()) +
         "; equilibrium formulas are only guaranteed on transitive graphs");
  if (steps % 2 != 0)
    ++steps;
  EigenSystem es = laplacian_eigensystem(graph, true);
  FlockingSchedule sched = solve_f(uniform_discrete_measure(es.values), c, T, steps);
  return EquilibriumKernel(std::move(graph), std::move(es), std::move(sched), sigma);
}

Eigen::VectorXd p_eigenvalues(const EquilibriumKernel &k, double t) {
  check_time(t, k.T(), "p_matrix");
  const double u = std::clamp(k.T() - t, 0.0, k.T());
  const double f = k.schedule().f(u), df = k.schedule().df(u);
  const Eigen::ArrayXd l = k.eigen().values.array();
  return (-df * l / (1.0 - f * l)).matrix();
}

Eigen::MatrixXd p_matrix(const EquilibriumKernel &k, double t) {
  return from_spectrum(k.eigen(), p_eigenvalues(k, t));
}

double equilibrium_control(const EquilibriumKernel &k, int i, double t, const Eigen::VectorXd &x) {
  if (i < 0 || i >= k.n())
    throw ParameterError("equilibrium_control: vertex out of range");
  if (x.size() != k.n())
    throw ParameterError("equilibrium_control: state dimension mismatch");
  const Eigen::VectorXd rho = p_eigenvalues(k, t);
  const auto &v = k.eigen().vectors;
  return -(v.row(i).array() * rho.transpose().array()).matrix().dot(v.transpose() * x);
}

double schedule_integral(const FlockingSchedule &s, double t,
                         const std::function<double(double)> &g) {
  check_time(t, s.T(), "schedule_integral");
  if (t <= 0.0)
    return 0.0;
  const SimpsonGrid grid = simpson_grid(s, t);
  double acc = 0.0;
  for (Eigen::Index j = 0; j < grid.f.size(); ++j)
    acc += grid.w(j) * g(grid.f(j));
  return acc;
}

Eigen::VectorXd covariance_eigenvalues(const FlockingSchedule &s, const Eigen::VectorXd &lambda,
                                       double sigma, double t) {
  check_time(t, s.T(), "state_law");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(lambda.size());
  if (t <= 0.0)
    return out;
  const SimpsonGrid grid = simpson_grid(s, t);
  const double f_now = s.f(std::clamp(s.T() - t, 0.0, s.T()));
  for (Eigen::Index k = 0; k < lambda.size(); ++k)
    out(k) = sigma * sigma * variance_mode(grid, f_now, lambda(k));
  return out;
}

GaussianLaw state_law(const EquilibriumKernel &k, double t, const Eigen::VectorXd &x0) {
  check_time(t, k.T(), "state_law");
  if (x0.size() != k.n())
    throw ParameterError("state_law: x0 dimension mismatch");
  const auto &s = k.schedule();
  const Eigen::ArrayXd l = k.eigen().values.array();
  const double f_now = s.f(std::clamp(k.T() - t, 0.0, k.T()));
  const double f_T = s.f_nodes()(s.steps());
  const Eigen::VectorXd coef = ((1.0 - f_now * l) / (1.0 - f_T * l)).matrix();
  const auto &v = k.eigen().vectors;
  GaussianLaw law;
  law.mean = v * (coef.asDiagonal() * (v.transpose() * x0));
  law.cov_eigenvalues = covariance_eigenvalues(s, k.eigen().values, k.sigma(), t);
  law.covariance = from_spectrum(k.eigen(), law.cov_eigenvalues);
  law.covariance = 0.5 * (law.covariance + law.covariance.transpose());
  return law;
}

GaussianLaw state_law(const EquilibriumKernel &k, double t) {
  return state_law(k, t, Eigen::VectorXd::Zero(k.n()));
}

double player_variance(const EquilibriumKernel &k, double t) {
  return covariance_eigenvalues(k.schedule(), k.eigen().values, k.sigma(), t).mean();
}

double game_value(const EquilibriumKernel &k, const Eigen::VectorXd &x0) {
  if (x0.size() != k.n())
    throw ParameterError("game_value: x0 dimension mismatch");
  const Eigen::MatrixXd p0 = p_matrix(k, 0.0);
  const double tr = p0.trace();
  if (!(tr > 0.0))
    throw DomainError("game_value: Tr P(0) must be positive");
  const double df_T = k.schedule().df_nodes()(k.schedule().steps());
  const double s2 = k.sigma() * k.sigma();
  return (p0 * x0).squaredNorm() / (2.0 * tr) - 0.5 * s2 * std::log(tr / (k.n() * df_T));
}

double game_value(const EquilibriumKernel &k) { return game_value(k, Eigen::VectorXd::Zero(k.n())); }

double game_value_spectral(const EquilibriumKernel &k) {
  const double f_T = k.schedule().f_nodes()(k.schedule().steps());
  const Eigen::ArrayXd l = k.eigen().values.array();
  const double integral = (-l / (1.0 - f_T * l)).mean();
  return -0.5 * k.sigma() * k.sigma() * std::log(integral);
}

double limit_variance(const SpectralMeasure &mu, const FlockingSchedule &schedule, double sigma,
                      double t) {
  if (!(schedule.measure() == mu))
    throw ParameterError("limit_variance: schedule was built from a different measure");
  check_time(t, schedule.T(), "limit_variance");
  if (t <= 0.0)
    return 0.0;
  const SimpsonGrid grid = simpson_grid(schedule, t);
  const double f_now = schedule.f(std::clamp(schedule.T() - t, 0.0, schedule.T()));
  double acc = 0.0;
  for (Eigen::Index k = 0; k < mu.nodes().size(); ++k)
    acc += mu.weights()(k) * variance_mode(grid, f_now, mu.nodes()(k));
  return sigma * sigma * acc;
}

double dense_limit_variance(double c, double T, double sigma, double t) {
  return sigma * sigma * t * (1.0 + c * (T - t)) / (1.0 + c * T);
}

double limit_value(const SpectralMeasure &mu, const FlockingSchedule &schedule, double sigma) {
  if (!(schedule.measure() == mu))
    throw ParameterError("limit_value: schedule was built from a different measure");
  const double f_T = schedule.f_nodes()(schedule.steps());
  const double integral = integrate(mu, [f_T](double l) { return -l / (1.0 - l * f_T); });
  return -0.5 * sigma * sigma * std::log(integral);
}

double limit_variance_second_derivative_at_zero(const FlockingSchedule &schedule, double sigma) {
  const double f_T = schedule.f_nodes()(schedule.steps());
  const double df_T = schedule.df_nodes()(schedule.steps());
  const double q = q_eval(schedule.measure(), f_T).q;
  return -2.0 * sigma * sigma * df_T * df_T / (schedule.c() * q);
}

Eigen::MatrixXd f_matrix(const EquilibriumKernel &k, int i, double t) {
  if (i < 0 || i >= k.n())
    throw ParameterError("f_matrix: vertex out of range");
  const Eigen::MatrixXd p = p_matrix(k, t);
  const double tau = p.trace() / k.n();
  if (!(tau > 0.0))
    throw DomainError("f_matrix: Tr P must be positive");
  return p.col(i) * p.col(i).transpose() / tau;
}

double riccati_residual(const EquilibriumKernel &k, int i, double t) {
  if (k.transitive_status() == TransitiveHint::not_transitive)
    throw DomainError("riccati_residual: kernel graph is not transitive");
  if (i < 0 || i >= k.n())
    throw ParameterError("riccati_residual: vertex out of range");
  const double h = k.schedule().step();
  if (!(t - 2.0 * h >= -1e-12 && t + 2.0 * h <= k.T() * (1.0 + 1e-12)))
    throw ParameterError("riccati_residual: t must be interior (two steps from the ends)");
  const int n = k.n();
  const Eigen::MatrixXd p = p_matrix(k, t);
  const double tau = p.trace() / n;
  Eigen::MatrixXd p_hat(n, n);
  for (int j = 0; j < n; ++j)
    p_hat.col(j) = p.col(j) * (p(j, j) / tau);
  const Eigen::MatrixXd fi = p.col(i) * p.col(i).transpose() / tau;
  const Eigen::MatrixXd dfi = (-f_matrix(k, i, t + 2 * h) + 8.0 * f_matrix(k, i, t + h) -
                               8.0 * f_matrix(k, i, t - h) + f_matrix(k, i, t - 2 * h)) /
                              (12.0 * h);
  const Eigen::MatrixXd r =
      dfi - p_hat * fi - fi * p_hat.transpose() + fi.col(i) * fi.row(i);
  return r.cwiseAbs().maxCoeff();
}

double riccati_boundary_residual(const EquilibriumKernel &k, int i) {
  if (i < 0 || i >= k.n())
    throw ParameterError("riccati_boundary_residual: vertex out of range");
  const Eigen::MatrixXd l = laplacian(k.graph());
  const Eigen::MatrixXd target = k.c() * l.col(i) * l.row(i);
  return (f_matrix(k, i, k.T()) - target).cwiseAbs().maxCoeff();
}

double covariance_bound_value(double sigma, double c, double T, int degree, int distance,
                              double t) {
  if (distance == kInfiniteDistance)
    return 0.0;
  const double gamma = c * T / (1.0 + c * T);
  const double d = distance;
  return 2.0 * sigma * sigma * t * std::pow(gamma, d) * (1.0 + d * (1.0 - gamma)) /
         (degree * (1.0 - gamma) * (1.0 - gamma));
}

double covariance_bound(const EquilibriumKernel &k, int u, int v, double t) {
  if (u < 0 || v < 0 || u >= k.n() || v >= k.n())
    throw ParameterError("covariance_bound: vertex out of range");
  check_time(t, k.T(), "covariance_bound");
  const int d = graph_distances(k.graph(), u)[v];
  return covariance_bound_value(k.sigma(), k.c(), k.T(), degree_stats(k.graph()).min_degree, d, t);
}

} // namespace lqg
