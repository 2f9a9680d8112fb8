#pragma once

#include <functional>
#include <string>

#include <Eigen/Dense>

#include "lqgraph/graph.hpp"
#include "lqgraph/quadrature.hpp"

namespace lqg {

/// Eigenvalues ascending; column j of `vectors` pairs with values(j).
/// `vectors` is empty when only eigenvalues were requested.
struct EigenSystem {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

inline constexpr double kEigenClampTol = 1e-9;

/// D^{-1}A - I. Throws DomainError naming the first isolated vertex. The
/// result is symmetric exactly when g is regular.
Eigen::MatrixXd laplacian(const Graph &g);

bool is_symmetric(const Eigen::MatrixXd &m, double rel_tol = 1e-12);

/// Symmetric eigensolver. Throws DomainError for non-symmetric input.
EigenSystem eigendecompose(const Eigen::MatrixXd &m, bool with_vectors = true);

/// Eigendecomposition of laplacian(g) with the spectrum clamped to [-2, 0]
/// (values outside by more than kEigenClampTol raise NumericError).
EigenSystem laplacian_eigensystem(const Graph &g, bool with_vectors = true);

Eigen::VectorXd clamp_laplacian_spectrum(const Eigen::VectorXd &values);

enum class MeasureKind { discrete, dirac_minus_one, cycle_limit, torus_limit, kesten_mckay };

const char *to_string(MeasureKind kind);

/// Probability measure on [-2, 0] carried as a weighted node list. For
/// discrete measures the nodes are the atoms; for the analytic limits they
/// are a quadrature rule.
class SpectralMeasure {
public:
  SpectralMeasure(MeasureKind kind, int param, QuadratureRule rule);

  MeasureKind kind() const { return kind_; }
  /// d for torus_limit and kesten_mckay, 0 otherwise.
  int param() const { return param_; }
  const Eigen::VectorXd &nodes() const { return rule_.nodes; }
  const Eigen::VectorXd &weights() const { return rule_.weights; }
  std::string name() const;

  bool operator==(const SpectralMeasure &other) const;

private:
  MeasureKind kind_;
  int param_;
  QuadratureRule rule_;
};

/// Atoms at arbitrary values, weights summing to one.
SpectralMeasure discrete_measure(const Eigen::VectorXd &values, const Eigen::VectorXd &weights);
SpectralMeasure uniform_discrete_measure(const Eigen::VectorXd &values);

/// (1/n) sum of delta at the Laplacian eigenvalues of a regular graph.
SpectralMeasure empirical_measure(const Graph &g);

SpectralMeasure dirac_minus_one();
SpectralMeasure cycle_limit();
SpectralMeasure torus_limit(int d);
SpectralMeasure kesten_mckay(int d);

/// kind in {"dirac", "cycle", "torus", "kesten_mckay"}; `d` used by the
/// last two.
SpectralMeasure limit_measure(const std::string &kind, int d = 0);
/// Parses "dirac", "cycle", "torus:D", "km:D" / "kesten_mckay:D".
SpectralMeasure parse_measure_spec(const std::string &text);

double integrate(const SpectralMeasure &mu, const std::function<double(double)> &h);

struct Moments {
  double mean;
  double variance;
};

Moments measure_moments(const SpectralMeasure &mu);

/// Kesten-McKay density of the Laplacian spectrum of a d-regular tree.
double kesten_mckay_density(int d, double lambda);
double kesten_mckay_cdf(int d, double lambda);

/// sup |F_emp - F| between the uniform distribution on `samples` and a
/// continuous CDF.
double ks_distance(Eigen::VectorXd samples, const std::function<double(double)> &cdf);

} // namespace lqg
