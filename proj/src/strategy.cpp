#include "lqgraph/strategy.hpp"

#include <algorithm>
#include <cmath>

#include "lqgraph/errors.hpp"
#include "lqgraph/parallel.hpp"

namespace lqg {

namespace {

constexpr double kRiccatiCap = 1e8;

void check_even(const LinearProfile &prof) {
  if (prof.intervals() % 2 != 0)
    throw ParameterError("profile grid needs an even number of intervals");
}

// K at a node in whichever form is cheapest to apply.
struct NodeGain {
  bool diagonal;
  Eigen::MatrixXd dense;
  Eigen::VectorXd diag;
};

NodeGain gain_at(const LinearProfile &prof, int k) {
  if (prof.form() == LinearProfile::Form::diagonal)
    return {true, {}, prof.diagonal_node(k)};
  return {false, prof.node(k), {}};
}

struct MomentState {
  Eigen::VectorXd m;
  Eigen::MatrixXd S;
  Eigen::VectorXd running;
};

MomentState moment_rhs(const NodeGain &K, const MomentState &x, double sigma) {
  MomentState d;
  Eigen::MatrixXd ks;
  Eigen::VectorXd km;
  if (K.diagonal) {
    km = K.diag.cwiseProduct(x.m);
    ks = K.diag.asDiagonal() * x.S;
    d.running = 0.5 * (K.diag.array().square() * x.S.diagonal().array() + km.array().square()).matrix();
  } else {
    km = K.dense * x.m;
    ks = K.dense * x.S;
    d.running = 0.5 * ((ks.cwiseProduct(K.dense)).rowwise().sum().array() + km.array().square()).matrix();
  }
  d.m = -km;
  d.S = -ks - ks.transpose();
  d.S.diagonal().array() += sigma * sigma;
  return d;
}

MomentState axpy(const MomentState &x, double a, const MomentState &d) {
  return {x.m + a * d.m, x.S + a * d.S, x.running + a * d.running};
}

Eigen::MatrixXd terminal_matrix(const Graph &g) {
  Eigen::MatrixXd m(g.n(), g.n());
  for (int v = 0; v < g.n(); ++v)
    m.row(v) = terminal_functional(g, v).transpose();
  return m;
}

} // namespace

const char *to_string(LinearProfile::Tag tag) {
  switch (tag) {
  case LinearProfile::Tag::equilibrium: return "equilibrium";
  case LinearProfile::Tag::mean_field: return "mean_field";
  case LinearProfile::Tag::cooperative: return "cooperative";
  case LinearProfile::Tag::custom: return "custom";
  }
  return "custom";
}

LinearProfile::LinearProfile(double T, int n, int intervals, Tag tag, Form form)
    : T_(T), n_(n), intervals_(intervals), tag_(tag), form_(form) {
  if (!(T > 0.0))
    throw ParameterError("profile horizon must be positive");
  if (intervals < 1)
    throw ParameterError("profile needs at least two nodes");
}

LinearProfile LinearProfile::dense(double T, std::vector<Eigen::MatrixXd> nodes, Tag tag) {
  if (nodes.size() < 2)
    throw ParameterError("profile needs at least two nodes");
  const auto n = nodes.front().rows();
  for (const auto &k : nodes)
    if (k.rows() != n || k.cols() != n || !k.allFinite())
      throw ParameterError("profile nodes must be finite n x n matrices");
  LinearProfile p(T, static_cast<int>(n), static_cast<int>(nodes.size()) - 1, tag, Form::dense);
  p.mat_nodes_ = std::move(nodes);
  return p;
}

LinearProfile LinearProfile::diagonal(double T, std::vector<Eigen::VectorXd> nodes, Tag tag) {
  if (nodes.size() < 2)
    throw ParameterError("profile needs at least two nodes");
  const auto n = nodes.front().size();
  for (const auto &k : nodes)
    if (k.size() != n || !k.allFinite())
      throw ParameterError("profile nodes must be finite n-vectors");
  LinearProfile p(T, static_cast<int>(n), static_cast<int>(nodes.size()) - 1, tag,
                  Form::diagonal);
  p.vec_nodes_ = std::move(nodes);
  return p;
}

LinearProfile LinearProfile::spectral(double T, Eigen::MatrixXd basis,
                                      std::vector<Eigen::VectorXd> eigenvalues, Tag tag) {
  if (eigenvalues.size() < 2)
    throw ParameterError("profile needs at least two nodes");
  const auto n = basis.rows();
  if (basis.cols() != n)
    throw ParameterError("profile basis must be square");
  for (const auto &k : eigenvalues)
    if (k.size() != n || !k.allFinite())
      throw ParameterError("profile eigenvalues must be finite n-vectors");
  LinearProfile p(T, static_cast<int>(n), static_cast<int>(eigenvalues.size()) - 1, tag,
                  Form::spectral);
  p.basis_ = std::move(basis);
  p.vec_nodes_ = std::move(eigenvalues);
  return p;
}

Eigen::MatrixXd LinearProfile::node(int k) const {
  switch (form_) {
  case Form::dense: return mat_nodes_[k];
  case Form::diagonal: return vec_nodes_[k].asDiagonal();
  case Form::spectral: return basis_ * vec_nodes_[k].asDiagonal() * basis_.transpose();
  }
  return {};
}

Eigen::MatrixXd LinearProfile::at(double t) const {
  if (!(t >= -1e-12 * T_ && t <= T_ * (1.0 + 1e-12)))
    throw ParameterError("profile evaluated outside [0,T]");
  const double s = std::clamp(t / step(), 0.0, static_cast<double>(intervals_));
  const double r = std::round(s);
  if (std::abs(s - r) <= 1e-9)
    return node(static_cast<int>(r));
  const int k = std::min(static_cast<int>(std::floor(s)), intervals_ - 1);
  const double w = s - k;
  switch (form_) {
  case Form::dense: return (1.0 - w) * mat_nodes_[k] + w * mat_nodes_[k + 1];
  case Form::diagonal:
    return ((1.0 - w) * vec_nodes_[k] + w * vec_nodes_[k + 1]).asDiagonal();
  case Form::spectral:
    return basis_ * ((1.0 - w) * vec_nodes_[k] + w * vec_nodes_[k + 1]).asDiagonal() *
           basis_.transpose();
  }
  return {};
}

Eigen::RowVectorXd LinearProfile::row(int i, double t) const {
  if (i < 0 || i >= n_)
    throw ParameterError("profile row out of range");
  return at(t).row(i);
}

LinearProfile equilibrium_profile(const EquilibriumKernel &k) {
  const auto &s = k.schedule();
  const int steps = s.steps();
  std::vector<Eigen::VectorXd> rho(steps + 1);
  const Eigen::ArrayXd l = k.eigen().values.array();
  for (int j = 0; j <= steps; ++j) {
    // Node j is time t_j; P(t_j) uses f at T - t_j, which is node steps - j.
    const double f = s.f_nodes()(steps - j), df = s.df_nodes()(steps - j);
    rho[j] = (-df * l / (1.0 - f * l)).matrix();
  }
  return LinearProfile::spectral(k.T(), k.eigen().vectors, std::move(rho),
                                 LinearProfile::Tag::equilibrium);
}

LinearProfile mf_profile(const Graph &g, double c, double T, int steps) {
  if (!(c > 0.0) || !(T > 0.0))
    throw ParameterError("mf_profile: c and T must be positive");
  if (steps < 2)
    throw ParameterError("mf_profile: need at least two steps");
  if (steps % 2 != 0)
    ++steps;
  std::vector<Eigen::VectorXd> nodes(steps + 1);
  for (int j = 0; j <= steps; ++j) {
    const double t = T * j / steps;
    nodes[j] = Eigen::VectorXd::Constant(g.n(), c / (1.0 + c * (T - t)));
  }
  return LinearProfile::diagonal(T, std::move(nodes), LinearProfile::Tag::mean_field);
}

Eigen::VectorXd terminal_functional(const Graph &g, int v) {
  if (v < 0 || v >= g.n())
    throw ParameterError("terminal_functional: vertex out of range");
  Eigen::VectorXd l = Eigen::VectorXd::Zero(g.n());
  l(v) = 1.0;
  const int deg = g.degree(v);
  for (int u : g.neighbors(v))
    l(u) -= 1.0 / deg;
  return l;
}

Eigen::VectorXd costs_under_profile(const Graph &g, const LinearProfile &prof,
                                    const Eigen::VectorXd &x0, double sigma, double c) {
  if (prof.n() != g.n())
    throw ParameterError("cost_under_profile: profile size does not match graph");
  if (x0.size() != g.n())
    throw ParameterError("cost_under_profile: x0 dimension mismatch");
  if (!(sigma >= 0.0) || !(c > 0.0))
    throw ParameterError("cost_under_profile: need sigma >= 0 and c > 0");
  check_even(prof);
  const int n = g.n();
  const double H = 2.0 * prof.step();
  MomentState x{x0, Eigen::MatrixXd::Zero(n, n), Eigen::VectorXd::Zero(n)};
  NodeGain k0 = gain_at(prof, 0);
  for (int j = 0; j < prof.intervals(); j += 2) {
    const NodeGain k1 = gain_at(prof, j + 1);
    NodeGain k2 = gain_at(prof, j + 2);
    const MomentState d1 = moment_rhs(k0, x, sigma);
    const MomentState d2 = moment_rhs(k1, axpy(x, 0.5 * H, d1), sigma);
    const MomentState d3 = moment_rhs(k1, axpy(x, 0.5 * H, d2), sigma);
    const MomentState d4 = moment_rhs(k2, axpy(x, H, d3), sigma);
    x.m += H / 6.0 * (d1.m + 2.0 * d2.m + 2.0 * d3.m + d4.m);
    x.S += H / 6.0 * (d1.S + 2.0 * d2.S + 2.0 * d3.S + d4.S);
    x.S = 0.5 * (x.S + x.S.transpose()).eval();
    x.running += H / 6.0 * (d1.running + 2.0 * d2.running + 2.0 * d3.running + d4.running);
    k0 = std::move(k2);
  }
  if (!x.S.allFinite() || !x.m.allFinite())
    throw NumericError("cost_under_profile: moment propagation diverged");
  const Eigen::MatrixXd M = terminal_matrix(g);
  const Eigen::MatrixXd ms = M * x.S;
  const Eigen::VectorXd mm = M * x.m;
  const Eigen::VectorXd terminal =
      0.5 * c * ((ms.cwiseProduct(M)).rowwise().sum().array() + mm.array().square()).matrix();
  return x.running + terminal;
}

double cost_under_profile(const Graph &g, const LinearProfile &prof, int i,
                          const Eigen::VectorXd &x0, double sigma, double c) {
  if (i < 0 || i >= g.n())
    throw ParameterError("cost_under_profile: vertex out of range");
  return costs_under_profile(g, prof, x0, sigma, c)(i);
}

BestResponse best_response(const Graph &g, const LinearProfile &prof, int i, double c,
                           double sigma, const Eigen::VectorXd &x0) {
  if (prof.n() != g.n())
    throw ParameterError("best_response: profile size does not match graph");
  if (i < 0 || i >= g.n())
    throw ParameterError("best_response: vertex out of range");
  if (x0.size() != g.n())
    throw ParameterError("best_response: x0 dimension mismatch");
  check_even(prof);
  const double H = 2.0 * prof.step();
  const double s2 = sigma * sigma;

  auto frozen = [&](int k) {
    NodeGain K = gain_at(prof, k);
    if (K.diagonal)
      K.diag(i) = 0.0;
    else
      K.dense.row(i).setZero();
    return K;
  };
  auto rhs = [&](const NodeGain &K, const Eigen::MatrixXd &F) {
    Eigen::MatrixXd a = K.diagonal ? Eigen::MatrixXd(K.diag.asDiagonal() * F)
                                   : Eigen::MatrixXd(K.dense.transpose() * F);
    Eigen::MatrixXd d = F.col(i) * F.col(i).transpose();
    d += a + a.transpose();
    return d;
  };

  const Eigen::VectorXd l = terminal_functional(g, i);
  Eigen::MatrixXd F = c * l * l.transpose();
  double h = 0.0;
  const int macro = prof.intervals() / 2;
  std::vector<double> times(macro + 1);
  std::vector<Eigen::RowVectorXd> rows(macro + 1);
  times[macro] = prof.T();
  rows[macro] = F.row(i);
  NodeGain k0 = frozen(prof.intervals());
  for (int j = prof.intervals(); j > 0; j -= 2) {
    const NodeGain k1 = frozen(j - 1);
    NodeGain k2 = frozen(j - 2);
    const Eigen::MatrixXd d1 = rhs(k0, F);
    const Eigen::MatrixXd f2 = F - 0.5 * H * d1;
    const Eigen::MatrixXd d2 = rhs(k1, f2);
    const Eigen::MatrixXd f3 = F - 0.5 * H * d2;
    const Eigen::MatrixXd d3 = rhs(k1, f3);
    const Eigen::MatrixXd f4 = F - H * d3;
    const Eigen::MatrixXd d4 = rhs(k2, f4);
    h += H / 6.0 * 0.5 * s2 * (F.trace() + 2.0 * f2.trace() + 2.0 * f3.trace() + f4.trace());
    F -= H / 6.0 * (d1 + 2.0 * d2 + 2.0 * d3 + d4);
    F = 0.5 * (F + F.transpose()).eval();
    if (!F.allFinite() || F.cwiseAbs().maxCoeff() > kRiccatiCap)
      throw NumericError("best_response: Riccati solution exceeded cap at t=" +
                         std::to_string((j - 2) * prof.step()));
    const int m = (j - 2) / 2;
    times[m] = (j - 2) * prof.step();
    rows[m] = F.row(i);
    k0 = std::move(k2);
  }
  return {0.5 * x0.dot(F * x0) + h, std::move(times), std::move(rows)};
}

double deviation_gap(const Graph &g, const LinearProfile &prof, int i, double c, double sigma,
                     const Eigen::VectorXd &x0) {
  return cost_under_profile(g, prof, i, x0, sigma, c) -
         best_response(g, prof, i, c, sigma, x0).value;
}

EpsilonBounds epsilon_bounds(const Graph &g, double c, double T, double sigma) {
  if (!(c > 0.0) || !(T > 0.0) || !(sigma > 0.0))
    throw ParameterError("epsilon_bounds: c, T, sigma must be positive");
  const double ct = c * T;
  const double pre = sigma * sigma * ct / (1.0 + ct);
  const double root = ct * (2.0 + ct);
  EpsilonBounds out;
  out.per_vertex.resize(g.n());
  double diag = 0.0;
  for (int v = 0; v < g.n(); ++v) {
    const int deg = g.degree(v);
    out.per_vertex(v) = deg == 0 ? 0.0 : pre * std::sqrt(root / deg);
    diag += 1.0 / std::sqrt(static_cast<double>(std::max(1, deg)));
  }
  out.aggregate = pre * std::sqrt(root / std::max(1, degree_stats(g).min_degree));
  out.averaged_degree_diagnostic = diag / g.n();
  return out;
}

std::vector<AuditEntry> audit_profile(const Graph &g, const LinearProfile &prof, double c,
                                      double sigma, const Eigen::VectorXd &x0,
                                      const Eigen::VectorXd &bound, double tol) {
  if (bound.size() != g.n())
    throw ParameterError("audit_profile: bound size mismatch");
  const Eigen::VectorXd costs = costs_under_profile(g, prof, x0, sigma, c);
  std::vector<AuditEntry> out(g.n());
  parallel_for(static_cast<std::size_t>(g.n()), [&](std::size_t v) {
    const int i = static_cast<int>(v);
    const double br = best_response(g, prof, i, c, sigma, x0).value;
    const double gap = costs(i) - br;
    out[v] = {i, costs(i), br, gap, bound(i), gap <= bound(i) + tol};
  });
  return out;
}

} // namespace lqg
