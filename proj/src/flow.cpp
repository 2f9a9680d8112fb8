#include "lqgraph/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lqgraph/errors.hpp"

namespace lqg {

QValue q_eval(const SpectralMeasure &mu, double x) {
  if (!(x >= 0.0) || !std::isfinite(x))
    throw ParameterError("q_eval: x must be finite and >= 0");
  const auto &l = mu.nodes();
  const auto &w = mu.weights();
  double log_q = 0.0, ratio = 0.0;
  for (Eigen::Index k = 0; k < l.size(); ++k) {
    const double a = 1.0 - x * l(k);
    log_q += w(k) * std::log1p(-x * l(k));
    ratio += w(k) * (-l(k) / a);
  }
  const double q = std::exp(log_q);
  if (!std::isfinite(q) || !std::isfinite(ratio))
    throw NumericError("q_eval: non-finite result");
  return {q, q * ratio};
}

double q_second(const SpectralMeasure &mu, double x) {
  if (!(x >= 0.0) || !std::isfinite(x))
    throw ParameterError("q_second: x must be finite and >= 0");
  const auto &l = mu.nodes();
  const auto &w = mu.weights();
  double log_q = 0.0, r1 = 0.0, r2 = 0.0;
  for (Eigen::Index k = 0; k < l.size(); ++k) {
    const double a = 1.0 - x * l(k);
    log_q += w(k) * std::log1p(-x * l(k));
    r1 += w(k) * (-l(k) / a);
    r2 += w(k) * (l(k) * l(k) / (a * a));
  }
  return std::exp(log_q) * (r1 * r1 - r2);
}

FlockingSchedule::FlockingSchedule(double c, double T, Eigen::VectorXd f, Eigen::VectorXd df,
                                   SpectralMeasure measure)
    : c_(c), T_(T), f_(std::move(f)), df_(std::move(df)), measure_(std::move(measure)) {
  if (f_.size() < 2 || f_.size() != df_.size())
    throw ParameterError("FlockingSchedule: bad node arrays");
}

int FlockingSchedule::node_index(double t) const {
  const double s = t / step();
  const double r = std::round(s);
  if (std::abs(s - r) <= 1e-9 && r >= 0.0 && r <= steps())
    return static_cast<int>(r);
  return -1;
}

double FlockingSchedule::f(double t) const {
  if (!(t >= -1e-12 * T_ && t <= T_ * (1.0 + 1e-12)))
    throw ParameterError("FlockingSchedule: t outside [0,T]");
  if (const int k = node_index(t); k >= 0)
    return f_(k);
  const double h = step();
  const int k = std::clamp(static_cast<int>(std::floor(t / h)), 0, steps() - 1);
  const double y0 = f_(k), y1 = f_(k + 1);
  double m0 = df_(k), m1 = df_(k + 1);
  const double delta = (y1 - y0) / h;
  if (delta == 0.0) {
    m0 = m1 = 0.0;
  } else {
    // Fritsch-Carlson limiter.
    const double a = m0 / delta, b = m1 / delta;
    if (a < 0.0)
      m0 = 0.0;
    if (b < 0.0)
      m1 = 0.0;
    const double s = a * a + b * b;
    if (s > 9.0) {
      const double tau = 3.0 / std::sqrt(s);
      m0 = tau * a * delta;
      m1 = tau * b * delta;
    }
  }
  const double u = (t - k * h) / h;
  const double h00 = (1 + 2 * u) * (1 - u) * (1 - u), h10 = u * (1 - u) * (1 - u);
  const double h01 = u * u * (3 - 2 * u), h11 = u * u * (u - 1);
  return h00 * y0 + h10 * h * m0 + h01 * y1 + h11 * h * m1;
}

double FlockingSchedule::df(double t) const {
  if (const int k = node_index(t); k >= 0)
    return df_(k);
  return c_ * q_eval(measure_, f(t)).dq;
}

FlockingSchedule solve_f(const SpectralMeasure &mu, double c, double T, int steps) {
  if (!(c > 0.0) || !(T > 0.0) || !std::isfinite(c) || !std::isfinite(T))
    throw ParameterError("solve_f: c and T must be positive");
  if (steps < 100)
    throw ParameterError("solve_f: steps must be >= 100");
  const double h = T / steps;
  Eigen::VectorXd f(steps + 1), df(steps + 1);
  auto rhs = [&](double x) { return c * q_eval(mu, std::max(x, 0.0)).dq; };
  f(0) = 0.0;
  df(0) = rhs(0.0);
  for (int k = 0; k < steps; ++k) {
    const double y = f(k);
    const double k1 = df(k);
    const double k2 = rhs(y + 0.5 * h * k1);
    const double k3 = rhs(y + 0.5 * h * k2);
    const double k4 = rhs(y + h * k3);
    f(k + 1) = y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    df(k + 1) = rhs(f(k + 1));
  }

  const double var = measure_moments(mu).variance;
  const double scale = std::max(1.0, c * T);
  const double tol = 1e-12 * scale;
  for (int k = 0; k <= steps; ++k) {
    const double t = k * h;
    if (!std::isfinite(f(k)) || f(k) < -tol || f(k) > c * t + tol)
      throw NumericError("solve_f: 0 <= f(t) <= ct violated at t=" + std::to_string(t));
    const double lower = c * t - (c * c * t * t / 2.0 + c * c * c * t * t * t / 6.0) * var;
    if (f(k) < lower - tol)
      throw NumericError("solve_f: variance lower bound violated at t=" + std::to_string(t));
  }
  for (int k = 0; k < steps; ++k) {
    const double d0 = f(k + 1) - f(k);
    if (!(d0 > 0.0))
      throw NumericError("solve_f: f not increasing at step " + std::to_string(k));
    if (k + 1 < steps && f(k + 2) - f(k + 1) > d0 + tol * h)
      throw NumericError("solve_f: f not concave at step " + std::to_string(k));
  }
  return FlockingSchedule(c, T, std::move(f), std::move(df), mu);
}

double cycle_phi(double x) {
  const double s = std::sqrt(1.0 + 2.0 * x);
  return std::log1p(s) - s + x + 0.5;
}

double cycle_phi_inverse(double y) {
  const double y0 = cycle_phi(0.0);
  if (!(y >= y0 - 1e-15))
    throw DomainError("cycle_phi_inverse: target below Phi(0) = log 2 - 1/2");
  if (y <= y0)
    return 0.0;
  double lo = 0.0, hi = std::max(y - std::numbers::ln2 + 0.5, 1.0);
  while (cycle_phi(hi) < y)
    hi *= 2.0;
  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double r = cycle_phi(x) - y;
    if (std::abs(r) <= 1e-13)
      break;
    if (r > 0.0)
      hi = x;
    else
      lo = x;
    const double s = std::sqrt(1.0 + 2.0 * x);
    double next = x - r * (1.0 + s) / s;
    if (!(next > lo && next < hi))
      next = 0.5 * (lo + hi);
    x = next;
  }
  return x;
}

double cycle_closed_form(double c, double t) {
  if (!(c > 0.0) || !(t >= 0.0))
    throw ParameterError("cycle_closed_form: need c > 0 and t >= 0");
  return cycle_phi_inverse(std::numbers::ln2 + (c * t - 1.0) / 2.0);
}

} // namespace lqg
