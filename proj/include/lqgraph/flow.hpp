#pragma once

#include <Eigen/Dense>

#include "lqgraph/spectral.hpp"

namespace lqg {

struct QValue {
  double q;
  double dq;
};

/// Q(x) = exp int log(1 - x lambda) dmu and Q'(x) = Q(x) int -lambda/(1 - x lambda) dmu.
QValue q_eval(const SpectralMeasure &mu, double x);

/// Q''(x) = Q(x) [ (int -lambda/(1 - x lambda))^2 - int lambda^2/(1 - x lambda)^2 ].
double q_second(const SpectralMeasure &mu, double x);

inline constexpr int kDefaultSteps = 2000;

/// Solution of f' = c Q'(f), f(0) = 0 tabulated on a uniform grid of [0, T].
class FlockingSchedule {
public:
  FlockingSchedule(double c, double T, Eigen::VectorXd f, Eigen::VectorXd df,
                   SpectralMeasure measure);

  double c() const { return c_; }
  double T() const { return T_; }
  int steps() const { return static_cast<int>(f_.size()) - 1; }
  double step() const { return T_ / steps(); }
  double time(int k) const { return k * step(); }
  const Eigen::VectorXd &f_nodes() const { return f_; }
  const Eigen::VectorXd &df_nodes() const { return df_; }
  const SpectralMeasure &measure() const { return measure_; }

  /// Node index when t is on the grid (to ~1e-9 of a step), else -1.
  int node_index(double t) const;

  /// f(t) for t in [0, T]: node value on the grid, monotone cubic Hermite
  /// interpolation between nodes.
  double f(double t) const;
  /// f'(t) = c Q'(f(t)).
  double df(double t) const;

private:
  double c_;
  double T_;
  Eigen::VectorXd f_;
  Eigen::VectorXd df_;
  SpectralMeasure measure_;
};

/// Fixed-step RK4 solve; throws NumericError when the result violates the
/// shape bounds 0 <= f <= ct, monotonicity, concavity or the variance lower
/// bound.
FlockingSchedule solve_f(const SpectralMeasure &mu, double c, double T,
                         int steps = kDefaultSteps);

/// Phi(x) = log(1 + sqrt(1 + 2x)) - sqrt(1 + 2x) + x + 1/2.
double cycle_phi(double x);
double cycle_phi_inverse(double y);
/// f(t) = Phi^{-1}(log 2 + (ct - 1)/2) for the cycle limit measure.
double cycle_closed_form(double c, double t);

} // namespace lqg
