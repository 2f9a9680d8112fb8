#include "lqgraph/montecarlo.hpp"

#include <algorithm>
#include <cmath>

#include "lqgraph/counter_rng.hpp"
#include "lqgraph/errors.hpp"
#include "lqgraph/parallel.hpp"

namespace lqg {

namespace {

constexpr Eigen::Index kPathBlock = 256;
constexpr int kJackknifeGroups = 100;

struct Groups {
  int count;
  std::vector<Eigen::Index> begin;
};

Groups make_groups(Eigen::Index paths) {
  Groups g;
  g.count = static_cast<int>(std::min<Eigen::Index>(kJackknifeGroups, paths));
  g.begin.resize(g.count + 1);
  for (int k = 0; k <= g.count; ++k)
    g.begin[k] = paths * k / g.count;
  return g;
}

double jackknife_se(const Eigen::VectorXd &leave_out) {
  const Eigen::Index g = leave_out.size();
  if (g < 2)
    return 0.0;
  const double m = leave_out.mean();
  return std::sqrt((g - 1.0) / g * (leave_out.array() - m).square().sum());
}

// Sample variance from sums over N samples.
double var_from_sums(double s1, double s2, double n) {
  return n > 1.0 ? (s2 - s1 * s1 / n) / (n - 1.0) : 0.0;
}

double cov_from_sums(double sx, double sy, double sxy, double n) {
  return n > 1.0 ? (sxy - sx * sy / n) / (n - 1.0) : 0.0;
}

} // namespace

int PathEnsemble::time_index(double t) const {
  for (std::size_t k = 0; k < times.size(); ++k)
    if (std::abs(times[k] - t) <= 1e-9 * std::max(1.0, std::abs(t)))
      return static_cast<int>(k);
  throw ParameterError("ensemble: time " + std::to_string(t) + " was not recorded");
}

PathEnsemble simulate(const Graph &g, const LinearProfile &prof, double sigma,
                      const SimConfig &cfg, const Eigen::VectorXd &x0) {
  const int n = g.n();
  if (prof.n() != n)
    throw ParameterError("simulate: profile size does not match graph");
  if (x0.size() != n)
    throw ParameterError("simulate: x0 dimension mismatch");
  if (cfg.n_paths < 1)
    throw ParameterError("simulate: n_paths must be >= 1");
  if (!(cfg.dt > 0.0) || !(sigma >= 0.0))
    throw ParameterError("simulate: need dt > 0 and sigma >= 0");
  const double T = prof.T();
  const double ratio = T / cfg.dt;
  const int steps = static_cast<int>(std::llround(ratio));
  if (steps < 1 || std::abs(ratio - steps) > 1e-9 * ratio)
    throw ParameterError("simulate: dt must divide T");

  std::vector<double> rec = cfg.record_times.empty() ? std::vector<double>{T} : cfg.record_times;
  std::vector<int> rec_steps;
  for (double t : rec) {
    const double s = t / cfg.dt;
    const long long k = std::llround(s);
    if (k < 0 || k > steps || std::abs(s - k) > 1e-9 * std::max(1.0, s))
      throw ParameterError("simulate: record time " + std::to_string(t) + " is off the dt grid");
    rec_steps.push_back(static_cast<int>(k));
  }

  PathEnsemble e;
  e.profile_tag = prof.tag();
  e.config = cfg;
  e.config.record_times = rec;
  e.x0 = x0;
  e.times = rec;
  e.states.resize(rec.size());

  const Eigen::Index paths = cfg.n_paths;
  Eigen::MatrixXd X = x0.replicate(1, paths);
  auto record = [&](int step) {
    for (std::size_t r = 0; r < rec_steps.size(); ++r)
      if (rec_steps[r] == step)
        e.states[r] = X.transpose();
  };
  record(0);
  const Eigen::Index blocks = (paths + kPathBlock - 1) / kPathBlock;
  const double noise = sigma * std::sqrt(cfg.dt);
  const bool diagonal = prof.form() == LinearProfile::Form::diagonal;
  for (int k = 0; k < steps; ++k) {
    const Eigen::MatrixXd K = prof.at(k * cfg.dt);
    const Eigen::VectorXd kd = diagonal ? Eigen::VectorXd(K.diagonal()) : Eigen::VectorXd();
    parallel_for(static_cast<std::size_t>(blocks), [&](std::size_t b) {
      const Eigen::Index c0 = static_cast<Eigen::Index>(b) * kPathBlock;
      const Eigen::Index w = std::min(kPathBlock, paths - c0);
      auto xb = X.middleCols(c0, w);
      Eigen::MatrixXd drift = diagonal ? Eigen::MatrixXd(kd.asDiagonal() * xb)
                                       : Eigen::MatrixXd(K * xb);
      for (Eigen::Index p = 0; p < w; ++p)
        for (int v = 0; v < n; ++v)
          xb(v, p) += -cfg.dt * drift(v, p) +
                      noise * rng::normal(cfg.seed, static_cast<std::uint64_t>(c0 + p),
                                          static_cast<std::uint64_t>(v),
                                          static_cast<std::uint64_t>(k));
    });
    if ((k + 1) % 50 == 0 || k + 1 == steps) {
      if (!X.allFinite()) {
        Eigen::Index bad = 0;
        while (bad < paths && X.col(bad).allFinite())
          ++bad;
        throw NumericError("simulate: non-finite state on path " + std::to_string(bad) +
                           " by step " + std::to_string(k + 1));
      }
    }
    record(k + 1);
  }
  return e;
}

PathEnsemble simulate(const Graph &g, const LinearProfile &prof, double sigma,
                      const SimConfig &cfg) {
  return simulate(g, prof, sigma, cfg, Eigen::VectorXd::Zero(g.n()));
}

EnsembleStats ensemble_stats(const PathEnsemble &e, double t,
                             const std::vector<std::pair<int, int>> &pairs) {
  const Eigen::MatrixXd &raw = e.states[e.time_index(t)];
  const Eigen::Index N = raw.rows(), n = raw.cols();
  // Shift by the first path: moments are unchanged, the sums lose less to
  // cancellation, and identical paths give exactly zero spread.
  const Eigen::RowVectorXd shift = raw.row(0);
  const Eigen::MatrixXd X = raw.rowwise() - shift;
  for (const auto &[u, v] : pairs)
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw ParameterError("ensemble_stats: pair vertex out of range");
  const Groups groups = make_groups(N);
  const int G = groups.count;

  Eigen::MatrixXd s1(G, n), s2(G, n), sp(G, static_cast<Eigen::Index>(pairs.size()));
  Eigen::VectorXd cnt(G);
  for (int g = 0; g < G; ++g) {
    const auto blk = X.middleRows(groups.begin[g], groups.begin[g + 1] - groups.begin[g]);
    cnt(g) = static_cast<double>(blk.rows());
    s1.row(g) = blk.colwise().sum();
    s2.row(g) = blk.array().square().colwise().sum();
    for (std::size_t q = 0; q < pairs.size(); ++q)
      sp(g, static_cast<Eigen::Index>(q)) = blk.col(pairs[q].first).dot(blk.col(pairs[q].second));
  }
  const Eigen::RowVectorXd S1 = s1.colwise().sum(), S2 = s2.colwise().sum();
  const Eigen::RowVectorXd SP = sp.colwise().sum();
  const double Nd = static_cast<double>(N);

  EnsembleStats out;
  out.pairs = pairs;
  out.mean = (S1 / Nd + shift).transpose();
  out.variance.resize(n);
  for (Eigen::Index v = 0; v < n; ++v)
    out.variance(v) = var_from_sums(S1(v), S2(v), Nd);
  out.pooled_variance = out.variance.mean();
  for (std::size_t q = 0; q < pairs.size(); ++q) {
    const auto [u, v] = pairs[q];
    out.covariance.push_back(cov_from_sums(S1(u), S1(v), SP(static_cast<Eigen::Index>(q)), Nd));
  }

  out.mean_se.resize(n);
  out.variance_se.resize(n);
  out.covariance_se.resize(pairs.size());
  Eigen::VectorXd loo(G), pooled(G);
  for (Eigen::Index v = 0; v < n; ++v) {
    for (int g = 0; g < G; ++g)
      loo(g) = (S1(v) - s1(g, v)) / (Nd - cnt(g));
    out.mean_se(v) = jackknife_se(loo);
  }
  pooled.setZero();
  for (Eigen::Index v = 0; v < n; ++v) {
    for (int g = 0; g < G; ++g) {
      loo(g) = var_from_sums(S1(v) - s1(g, v), S2(v) - s2(g, v), Nd - cnt(g));
      pooled(g) += loo(g) / static_cast<double>(n);
    }
    out.variance_se(v) = jackknife_se(loo);
  }
  out.pooled_variance_se = jackknife_se(pooled);
  for (std::size_t q = 0; q < pairs.size(); ++q) {
    const auto [u, v] = pairs[q];
    const auto qi = static_cast<Eigen::Index>(q);
    for (int g = 0; g < G; ++g)
      loo(g) = cov_from_sums(S1(u) - s1(g, u), S1(v) - s1(g, v), SP(qi) - sp(g, qi), Nd - cnt(g));
    out.covariance_se[q] = jackknife_se(loo);
  }
  return out;
}

const char *to_string(TestFunction h) {
  switch (h) {
  case TestFunction::tanh: return "tanh";
  case TestFunction::clipped_identity: return "clip";
  case TestFunction::cosine: return "cos";
  }
  return "tanh";
}

double apply_test_function(TestFunction h, double x) {
  switch (h) {
  case TestFunction::tanh: return std::tanh(x);
  case TestFunction::clipped_identity: return std::clamp(x, -1.0, 1.0);
  case TestFunction::cosine: return std::cos(x);
  }
  return 0.0;
}

double poincare_bound(const EquilibriumKernel &k, double t) {
  const Eigen::MatrixXd cov = state_law(k, t).covariance;
  return cov.cwiseAbs().sum() / (static_cast<double>(k.n()) * k.n());
}

ConcentrationResult empirical_measure_test(const PathEnsemble &e, const EquilibriumKernel &k,
                                           double t, TestFunction h) {
  if (e.n() != k.n())
    throw ParameterError("empirical_measure_test: ensemble and kernel sizes differ");
  const Eigen::MatrixXd &X = e.states[e.time_index(t)];
  const Eigen::Index N = X.rows();
  Eigen::VectorXd y =
      X.unaryExpr([h](double x) { return apply_test_function(h, x); }).rowwise().mean();
  y.array() -= y(0);
  const Groups groups = make_groups(N);
  Eigen::VectorXd s1(groups.count), s2(groups.count), cnt(groups.count);
  for (int g = 0; g < groups.count; ++g) {
    const auto seg = y.segment(groups.begin[g], groups.begin[g + 1] - groups.begin[g]);
    s1(g) = seg.sum();
    s2(g) = seg.squaredNorm();
    cnt(g) = static_cast<double>(seg.size());
  }
  const double S1 = s1.sum(), S2 = s2.sum(), Nd = static_cast<double>(N);
  Eigen::VectorXd loo(groups.count);
  for (int g = 0; g < groups.count; ++g)
    loo(g) = var_from_sums(S1 - s1(g), S2 - s2(g), Nd - cnt(g));
  ConcentrationResult r;
  r.sample_variance = var_from_sums(S1, S2, Nd);
  r.sample_variance_se = jackknife_se(loo);
  r.bound = poincare_bound(k, t);
  r.passed = r.sample_variance <= r.bound + 3.0 * r.sample_variance_se;
  return r;
}

} // namespace lqg
