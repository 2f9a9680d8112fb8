#include "lqgraph/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "lqgraph/errors.hpp"

namespace lqg {

namespace {

constexpr int kCosineNodes = 64;
constexpr int kKestenMcKayNodes = 256;
constexpr int kTorusCompressedNodes = 128;
constexpr int kTorusMaxAtoms = 4096;

void check_probability(const SpectralMeasure &mu, double tol = 1e-10) {
  const double mass = mu.weights().sum();
  if (std::abs(mass - 1.0) > tol)
    throw NumericError(mu.name() + ": total mass " + std::to_string(mass) + " != 1");
  if ((mu.weights().array() < 0.0).any())
    throw NumericError(mu.name() + ": negative weight");
  if (mu.nodes().size() > 0 &&
      (mu.nodes().minCoeff() < -2.0 - 1e-12 || mu.nodes().maxCoeff() > 1e-12))
    throw NumericError(mu.name() + ": support outside [-2,0]");
  const double mean = mu.nodes().dot(mu.weights());
  if (std::abs(mean + 1.0) > 1e-8)
    throw NumericError(mu.name() + ": mean " + std::to_string(mean) + " != -1");
}

// Distinct values of cos(2 pi U), U uniform, as a merged Gauss-Legendre rule
// in u.
QuadratureRule cosine_rule() {
  QuadratureRule u = gauss_legendre(kCosineNodes, 0.0, 1.0);
  QuadratureRule c{u.nodes.unaryExpr([](double x) { return std::cos(2.0 * std::numbers::pi * x); }),
                   u.weights};
  return merge_atoms(c, 1e-13);
}

QuadratureRule convolve(const QuadratureRule &a, const QuadratureRule &b) {
  const Eigen::Index na = a.nodes.size(), nb = b.nodes.size();
  QuadratureRule out{Eigen::VectorXd(na * nb), Eigen::VectorXd(na * nb)};
  for (Eigen::Index i = 0; i < na; ++i)
    for (Eigen::Index j = 0; j < nb; ++j) {
      out.nodes(i * nb + j) = a.nodes(i) + b.nodes(j);
      out.weights(i * nb + j) = a.weights(i) * b.weights(j);
    }
  return merge_atoms(out, 1e-13);
}

} // namespace

Eigen::MatrixXd laplacian(const Graph &g) {
  if (const auto v = g.first_isolated_vertex())
    throw DomainError("laplacian: vertex " + std::to_string(*v + 1) +
                      " is isolated (degree 0)");
  const int n = g.n();
  Eigen::MatrixXd l = -Eigen::MatrixXd::Identity(n, n);
  for (int v = 0; v < n; ++v) {
    const double inv = 1.0 / g.degree(v);
    for (int u : g.neighbors(v))
      l(v, u) = inv;
  }
  return l;
}

bool is_symmetric(const Eigen::MatrixXd &m, double rel_tol) {
  if (m.rows() != m.cols())
    return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

EigenSystem eigendecompose(const Eigen::MatrixXd &m, bool with_vectors) {
  if (!is_symmetric(m))
    throw DomainError("eigendecompose: matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      m, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericError("eigendecompose: eigensolver did not converge");
  EigenSystem out;
  out.values = es.eigenvalues();
  if (with_vectors)
    out.vectors = es.eigenvectors();
  return out;
}

Eigen::VectorXd clamp_laplacian_spectrum(const Eigen::VectorXd &values) {
  Eigen::VectorXd v = values;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (v(k) < -2.0 - kEigenClampTol || v(k) > kEigenClampTol) {
      std::ostringstream os;
      os << "Laplacian eigenvalue " << v(k) << " outside [-2,0]";
      throw NumericError(os.str());
    }
    v(k) = std::clamp(v(k), -2.0, 0.0);
  }
  return v;
}

EigenSystem laplacian_eigensystem(const Graph &g, bool with_vectors) {
  EigenSystem es = eigendecompose(laplacian(g), with_vectors);
  es.values = clamp_laplacian_spectrum(es.values);
  return es;
}

const char *to_string(MeasureKind kind) {
  switch (kind) {
  case MeasureKind::discrete: return "discrete";
  case MeasureKind::dirac_minus_one: return "dirac";
  case MeasureKind::cycle_limit: return "cycle";
  case MeasureKind::torus_limit: return "torus";
  case MeasureKind::kesten_mckay: return "kesten_mckay";
  }
  return "unknown";
}

SpectralMeasure::SpectralMeasure(MeasureKind kind, int param, QuadratureRule rule)
    : kind_(kind), param_(param), rule_(std::move(rule)) {
  if (rule_.nodes.size() != rule_.weights.size() || rule_.nodes.size() == 0)
    throw ParameterError("spectral measure: node/weight size mismatch");
}

std::string SpectralMeasure::name() const {
  std::string s = to_string(kind_);
  if (kind_ == MeasureKind::torus_limit || kind_ == MeasureKind::kesten_mckay)
    s += ":" + std::to_string(param_);
  return s;
}

bool SpectralMeasure::operator==(const SpectralMeasure &other) const {
  return kind_ == other.kind_ && param_ == other.param_ &&
         rule_.nodes.size() == other.rule_.nodes.size() &&
         rule_.nodes == other.rule_.nodes && rule_.weights == other.rule_.weights;
}

SpectralMeasure discrete_measure(const Eigen::VectorXd &values, const Eigen::VectorXd &weights) {
  SpectralMeasure mu(MeasureKind::discrete, 0, QuadratureRule{values, weights});
  check_probability(mu);
  return mu;
}

SpectralMeasure uniform_discrete_measure(const Eigen::VectorXd &values) {
  const auto n = values.size();
  return discrete_measure(values, Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)));
}

SpectralMeasure empirical_measure(const Graph &g) {
  const DegreeStats ds = degree_stats(g);
  if (!ds.is_regular)
    throw DomainError("empirical_measure: graph is not regular");
  if (ds.min_degree == 0)
    throw DomainError("empirical_measure: graph has isolated vertices");
  const EigenSystem es = laplacian_eigensystem(g, false);
  SpectralMeasure mu = uniform_discrete_measure(es.values);
  const Moments m = measure_moments(mu);
  if (std::abs(m.variance - 1.0 / ds.min_degree) > 1e-10)
    throw NumericError("empirical_measure: variance " + std::to_string(m.variance) +
                       " != 1/degree");
  return mu;
}

SpectralMeasure dirac_minus_one() {
  return SpectralMeasure(MeasureKind::dirac_minus_one, 0,
                         QuadratureRule{Eigen::VectorXd::Constant(1, -1.0),
                                        Eigen::VectorXd::Constant(1, 1.0)});
}

SpectralMeasure cycle_limit() {
  QuadratureRule c = cosine_rule();
  c.nodes.array() -= 1.0;
  SpectralMeasure mu(MeasureKind::cycle_limit, 0, std::move(c));
  check_probability(mu);
  return mu;
}

// The law of (1/d) sum cos(2 pi U_i) - 1 is built by repeated convolution of
// the one-dimensional cosine rule, compressing to a Gauss rule for the
// resulting discrete measure whenever the atom count grows past
// kTorusMaxAtoms. For d <= 2 this is exactly the tensor rule.
SpectralMeasure torus_limit(int d) {
  if (d < 1)
    throw ParameterError("torus_limit needs d >= 1");
  const QuadratureRule base = cosine_rule();
  QuadratureRule sum = base;
  for (int k = 1; k < d; ++k) {
    sum = convolve(sum, base);
    if (sum.nodes.size() > kTorusMaxAtoms)
      sum = compress_to_gauss(sum, kTorusCompressedNodes);
  }
  sum.nodes = (sum.nodes.array() / d - 1.0).matrix();
  sum.nodes = sum.nodes.cwiseMax(-2.0).cwiseMin(0.0);
  SpectralMeasure mu(MeasureKind::torus_limit, d, std::move(sum));
  check_probability(mu);
  return mu;
}

double kesten_mckay_density(int d, double lambda) {
  const double y = 1.0 + lambda;
  const double r = 2.0 * std::sqrt(d - 1.0) / d;
  if (std::abs(y) >= r)
    return 0.0;
  return std::sqrt(4.0 * (d - 1.0) - d * d * y * y) / (2.0 * std::numbers::pi * (1.0 - y * y));
}

namespace {

// Kesten-McKay weight in theta after y = r sin(theta).
double km_theta_weight(int d, double theta) {
  const double r = 2.0 * std::sqrt(d - 1.0) / d;
  const double s = std::sin(theta), c = std::cos(theta);
  return d * r * r * c * c / (2.0 * std::numbers::pi * (1.0 - r * r * s * s));
}

} // namespace

SpectralMeasure kesten_mckay(int d) {
  if (d < 3)
    throw ParameterError("kesten_mckay needs d >= 3");
  const double r = 2.0 * std::sqrt(d - 1.0) / d;
  const double half_pi = 0.5 * std::numbers::pi;
  QuadratureRule th = gauss_legendre(kKestenMcKayNodes, -half_pi, half_pi);
  QuadratureRule rule{Eigen::VectorXd(kKestenMcKayNodes), Eigen::VectorXd(kKestenMcKayNodes)};
  for (int k = 0; k < kKestenMcKayNodes; ++k) {
    rule.nodes(k) = r * std::sin(th.nodes(k)) - 1.0;
    rule.weights(k) = th.weights(k) * km_theta_weight(d, th.nodes(k));
  }
  SpectralMeasure mu(MeasureKind::kesten_mckay, d, std::move(rule));
  check_probability(mu);
  return mu;
}

double kesten_mckay_cdf(int d, double lambda) {
  const double r = 2.0 * std::sqrt(d - 1.0) / d;
  const double y = 1.0 + lambda;
  if (y <= -r)
    return 0.0;
  if (y >= r)
    return 1.0;
  const double theta = std::asin(y / r);
  const QuadratureRule q = gauss_legendre(64, -0.5 * std::numbers::pi, theta);
  double s = 0.0;
  for (int k = 0; k < 64; ++k)
    s += q.weights(k) * km_theta_weight(d, q.nodes(k));
  return std::clamp(s, 0.0, 1.0);
}

SpectralMeasure limit_measure(const std::string &kind, int d) {
  if (kind == "dirac")
    return dirac_minus_one();
  if (kind == "cycle")
    return cycle_limit();
  if (kind == "torus")
    return torus_limit(d);
  if (kind == "kesten_mckay" || kind == "km")
    return kesten_mckay(d);
  throw ParameterError("unknown limit measure '" + kind + "'");
}

SpectralMeasure parse_measure_spec(const std::string &text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  int d = 0;
  if (colon != std::string::npos) {
    try {
      std::size_t pos = 0;
      d = std::stoi(text.substr(colon + 1), &pos);
      if (pos != text.size() - colon - 1)
        throw ParameterError("");
    } catch (const std::exception &) {
      throw ParameterError("measure spec: bad parameter in '" + text + "'");
    }
  } else if (kind == "torus" || kind == "kesten_mckay" || kind == "km") {
    throw ParameterError("measure spec: '" + kind + "' needs :D");
  }
  return limit_measure(kind, d);
}

double integrate(const SpectralMeasure &mu, const std::function<double(double)> &h) {
  double s = 0.0;
  const auto &x = mu.nodes();
  const auto &w = mu.weights();
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double v = h(x(k));
    if (!std::isfinite(v))
      throw NumericError("integrate: non-finite integrand at lambda=" + std::to_string(x(k)));
    s += w(k) * v;
  }
  return s;
}

Moments measure_moments(const SpectralMeasure &mu) {
  const double mean = integrate(mu, [](double l) { return l; });
  const double var = integrate(mu, [mean](double l) { return (l - mean) * (l - mean); });
  return {mean, var};
}

double ks_distance(Eigen::VectorXd samples, const std::function<double(double)> &cdf) {
  std::sort(samples.data(), samples.data() + samples.size());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (Eigen::Index k = 0; k < samples.size(); ++k) {
    const double f = cdf(samples(k));
    d = std::max({d, std::abs(f - k / n), std::abs((k + 1) / n - f)});
  }
  return d;
}

} // namespace lqg
