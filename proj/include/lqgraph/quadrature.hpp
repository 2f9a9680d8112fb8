#pragma once

#include <functional>

#include <Eigen/Dense>

namespace lqg {

struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// n-point Gauss-Legendre rule on [a, b].
QuadratureRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// Gauss rule with `k` nodes for the discrete measure sum_j w_j delta_{x_j}
/// (Stieltjes recurrence followed by Golub-Welsch). Returns the input
/// unchanged when it already has at most k atoms.
QuadratureRule compress_to_gauss(const QuadratureRule &discrete, int k);

/// Merges atoms whose positions agree to `tol`, summing their weights.
QuadratureRule merge_atoms(const QuadratureRule &rule, double tol = 1e-14);

/// Composite Simpson on [a, b] with m (even) subintervals.
double simpson(const std::function<double(double)> &g, double a, double b, int m);

} // namespace lqg
