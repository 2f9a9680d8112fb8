#pragma once

#include <vector>

#include <Eigen/Dense>

#include "lqgraph/equilibrium.hpp"
#include "lqgraph/graph.hpp"

namespace lqg {

/// Time-dependent linear feedback: player i plays -(row i of K(t)) x.
/// K is tabulated on a uniform grid of [0, T]; `at` interpolates linearly
/// between nodes. Three storage forms keep large profiles cheap: dense
/// matrices, diagonals, or fixed-basis spectra K = V diag(k) V^T.
class LinearProfile {
public:
  enum class Tag { equilibrium, mean_field, cooperative, custom };
  enum class Form { dense, diagonal, spectral };

  static LinearProfile dense(double T, std::vector<Eigen::MatrixXd> nodes, Tag tag = Tag::custom);
  static LinearProfile diagonal(double T, std::vector<Eigen::VectorXd> nodes,
                                Tag tag = Tag::custom);
  static LinearProfile spectral(double T, Eigen::MatrixXd basis,
                                std::vector<Eigen::VectorXd> eigenvalues, Tag tag = Tag::custom);

  int n() const { return n_; }
  double T() const { return T_; }
  int intervals() const { return intervals_; }
  double step() const { return T_ / intervals_; }
  Tag tag() const { return tag_; }
  Form form() const { return form_; }

  /// Dense K at grid node k.
  Eigen::MatrixXd node(int k) const;
  /// Diagonal of K at node k (only for Form::diagonal).
  const Eigen::VectorXd &diagonal_node(int k) const { return vec_nodes_[k]; }
  Eigen::MatrixXd at(double t) const;
  Eigen::RowVectorXd row(int i, double t) const;

private:
  LinearProfile(double T, int n, int intervals, Tag tag, Form form);

  double T_;
  int n_;
  int intervals_;
  Tag tag_;
  Form form_;
  std::vector<Eigen::MatrixXd> mat_nodes_;
  std::vector<Eigen::VectorXd> vec_nodes_;
  Eigen::MatrixXd basis_;
};

const char *to_string(LinearProfile::Tag tag);

/// K(t) = P(t) on the kernel's schedule grid.
LinearProfile equilibrium_profile(const EquilibriumKernel &k);
/// Diagonal profile c / (1 + c(T - t)) for every player.
LinearProfile mf_profile(const Graph &g, double c, double T, int steps = kDefaultSteps);

/// Terminal functional: e_v - (1/deg v) sum_{u ~ v} e_u, or e_v when v is isolated.
Eigen::VectorXd terminal_functional(const Graph &g, int v);

/// Expected costs of every player under `prof`, from the moment ODEs
/// m' = -K m, S' = -K S - S K^T + sigma^2 I integrated by RK4 with step
/// twice the profile step (stage midpoints fall on profile nodes).
Eigen::VectorXd costs_under_profile(const Graph &g, const LinearProfile &prof,
                                    const Eigen::VectorXd &x0, double sigma, double c);
double cost_under_profile(const Graph &g, const LinearProfile &prof, int i,
                          const Eigen::VectorXd &x0, double sigma, double c);

struct BestResponse {
  double value;
  /// Macro-grid times (spacing twice the profile step) and the optimal
  /// feedback row e_i^T F(t) at each.
  std::vector<double> times;
  std::vector<Eigen::RowVectorXd> feedback;
};

/// Optimal linear feedback of player i against the frozen rows of `prof`.
/// With Kt = K with row i zeroed and value x^T F x / 2 + h, the HJB
/// reduces to
///   F' = F e_i e_i^T F + Kt^T F + F Kt,  F(T) = c l l^T,
///   h' = -sigma^2 Tr F / 2,               h(T) = 0,
/// integrated backward by RK4. Throws NumericError when ||F||_max > 1e8.
BestResponse best_response(const Graph &g, const LinearProfile &prof, int i, double c,
                           double sigma, const Eigen::VectorXd &x0);

double deviation_gap(const Graph &g, const LinearProfile &prof, int i, double c, double sigma,
                     const Eigen::VectorXd &x0);

struct EpsilonBounds {
  Eigen::VectorXd per_vertex;
  double aggregate;
  /// (1/n) sum (1 v deg)^{-1/2}.
  double averaged_degree_diagnostic;
};

/// eps_v = sigma^2 (cT/(1+cT)) sqrt(cT(2+cT)/deg v), 0 for isolated v;
/// the aggregate uses 1 v min degree.
EpsilonBounds epsilon_bounds(const Graph &g, double c, double T, double sigma);

struct AuditEntry {
  int vertex;
  double cost;
  double best_response_value;
  double gap;
  double epsilon_bound;
  bool satisfied;
};

/// Per-vertex deviation audit. A vertex is satisfied when
/// gap <= bound(v) + tol.
std::vector<AuditEntry> audit_profile(const Graph &g, const LinearProfile &prof, double c,
                                      double sigma, const Eigen::VectorXd &x0,
                                      const Eigen::VectorXd &bound, double tol);

} // namespace lqg
