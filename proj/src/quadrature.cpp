#include "lqgraph/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "lqgraph/errors.hpp"

namespace lqg {

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1)
    throw ParameterError("Gauss-Legendre needs n >= 1");
  QuadratureRule rule{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
        break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes(i) = mid - half * x;
    rule.nodes(n - 1 - i) = mid + half * x;
    rule.weights(i) = half * w;
    rule.weights(n - 1 - i) = half * w;
  }
  if (n == 1) {
    rule.nodes(0) = mid;
    rule.weights(0) = 2.0 * half;
  }
  return rule;
}

QuadratureRule merge_atoms(const QuadratureRule &rule, double tol) {
  const Eigen::Index m = rule.nodes.size();
  std::vector<Eigen::Index> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](Eigen::Index a, Eigen::Index b) { return rule.nodes(a) < rule.nodes(b); });
  std::vector<double> x, w;
  for (Eigen::Index k : idx) {
    if (!x.empty() && std::abs(rule.nodes(k) - x.back()) <= tol) {
      // Weighted position keeps the first moment exact.
      const double wn = w.back() + rule.weights(k);
      x.back() = (x.back() * w.back() + rule.nodes(k) * rule.weights(k)) / wn;
      w.back() = wn;
    } else {
      x.push_back(rule.nodes(k));
      w.push_back(rule.weights(k));
    }
  }
  return {Eigen::Map<Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size())),
          Eigen::Map<Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()))};
}

QuadratureRule compress_to_gauss(const QuadratureRule &discrete, int k) {
  const Eigen::Index m = discrete.nodes.size();
  if (m <= k)
    return discrete;
  const Eigen::VectorXd &x = discrete.nodes;
  const Eigen::VectorXd &w = discrete.weights;
  const double mass = w.sum();

  // Stieltjes with orthonormal polynomials evaluated at the atoms.
  Eigen::VectorXd alpha(k), beta(k);
  Eigen::VectorXd q_prev = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd q = Eigen::VectorXd::Constant(m, 1.0 / std::sqrt(mass));
  double b_prev = 0.0;
  for (int j = 0; j < k; ++j) {
    alpha(j) = (w.array() * x.array() * q.array().square()).sum();
    if (j + 1 == k)
      break;
    Eigen::VectorXd r = (x.array() - alpha(j)) * q.array() - b_prev * q_prev.array();
    const double b = std::sqrt((w.array() * r.array().square()).sum());
    if (!(b > 0.0))
      throw NumericError("compress_to_gauss: recurrence broke down");
    beta(j) = b;
    q_prev = q;
    q = r / b;
    b_prev = b;
  }

  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(k, k);
  for (int j = 0; j < k; ++j) {
    jacobi(j, j) = alpha(j);
    if (j + 1 < k) {
      jacobi(j, j + 1) = beta(j);
      jacobi(j + 1, j) = beta(j);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  if (es.info() != Eigen::Success)
    throw NumericError("compress_to_gauss: eigensolver failed");
  QuadratureRule out;
  out.nodes = es.eigenvalues();
  out.weights = mass * es.eigenvectors().row(0).transpose().array().square();
  return out;
}

double simpson(const std::function<double(double)> &g, double a, double b, int m) {
  if (m < 2 || m % 2 != 0)
    throw ParameterError("Simpson needs an even number of subintervals");
  const double h = (b - a) / m;
  double s = g(a) + g(b);
  for (int j = 1; j < m; ++j)
    s += (j % 2 ? 4.0 : 2.0) * g(a + j * h);
  return s * h / 3.0;
}

} // namespace lqg
