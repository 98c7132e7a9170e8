#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ancient/discretization.hpp"

namespace ancient {

struct WeightParams {
  double beta = 0.0;
  double alpha = 0.5;
  double delta0 = 0.0;

  /// Throws ParameterError unless beta > n, alpha in (0,1) and
  /// 0 < delta0 < -lambda_I (the upper bound is skipped when index == 0).
  void validate(int n, double lambda_I, int index) const;
};

/// Uniform times t_m = -T + m dt, m = 0..M, ending at t_M = 0.
class TimeGrid {
 public:
  TimeGrid() = default;
  TimeGrid(double T, int M);

  double T() const { return T_; }
  int M() const { return M_; }
  int size() const { return M_ + 1; }
  double dt() const { return T_ / M_; }
  double t(int m) const { return -T_ + m * dt(); }

 private:
  double T_ = 1.0;
  int M_ = 1;
};

/// Second-order D_t of the columns of U: centered inside, one-sided three
/// point formulas at both ends.
Eigen::MatrixXd time_derivative(const TimeGrid& time, const Eigen::MatrixXd& U);

/// u(s_j, t_m) with columns as time slices, and its time derivative.
struct SpaceTimeField {
  TimeGrid time;
  Eigen::MatrixXd values;
  Eigen::MatrixXd dt_values;

  static SpaceTimeField zero(const TimeGrid& time, int Ns);
  /// Fills dt_values by time_derivative.
  static SpaceTimeField from_values(const TimeGrid& time, Eigen::MatrixXd values);
  Eigen::VectorXd slice(int m) const { return values.col(m); }
};

/// |grad u|, |Hess u| per node of an axisymmetric grid function.
struct SpatialDerivatives {
  Eigen::VectorXd grad;
  Eigen::VectorXd hess_tt;
  Eigen::VectorXd hess_ee;
  Eigen::VectorXd hess;  // Frobenius norm
};

SpatialDerivatives spatial_derivatives(const Grid& grid, const Eigen::VectorXd& u);

/// max_j rho^beta |u|.
double weighted_c0(const Grid& grid, const Eigen::VectorXd& u, double beta);

/// sum_{j <= k} sup rho^{j+beta} |nabla^j u| on one time slice.
double weighted_ck(const Grid& grid, const Eigen::VectorXd& u, int k, double beta);

/// sum_{2i+j <= k} sup rho^{2i+j+beta} |D_t^i nabla^j u| over the space-time grid.
double weighted_ck(const Grid& grid, const SpaceTimeField& field, int k, double beta);

/// Discrete Holder seminorm of nabla^order u over the dyadic pair set: node
/// separations 1, 2, 4, ... with geodesic distance <= delta(g), times
/// offsets {0, 1, 4} dt. The tensor difference is taken in the frame
/// (profile tangent, rotation directions).
double holder_seminorm(const Grid& grid, const SpaceTimeField& field, int order, double alpha,
                       double beta_eff);
/// Same pair set restricted to a single time slice.
double holder_seminorm(const Grid& grid, const Eigen::VectorXd& u, int order, double alpha,
                       double beta_eff);

/// ||u||_{C^{k,alpha}_beta} = ||u||_{C^k_beta} + [nabla^k u]_{alpha, beta+k+alpha} on one slice.
double holder_norm(const Grid& grid, const Eigen::VectorXd& u, int k, double alpha, double beta);

/// e^{-delta0 t}(||u||_{C^{2,alpha}_beta} + ||d_t u||_{C^{0,alpha}_{beta+2}}) at slice m.
double star_slice(const Grid& grid, const SpaceTimeField& field, const WeightParams& p, int m);

/// sup over the time grid of star_slice.
double star_norm(const Grid& grid, const SpaceTimeField& field, const WeightParams& p);

/// Weighted L^2_{0,beta} norm (int |rho^beta u|^2 rho^{-n} dV)^{1/2}.
double weighted_l2(const Grid& grid, const Eigen::VectorXd& u, double beta);

/// Rows (t, e^{-delta0 t} star slice) for decay plots.
std::string norm_trace_csv(const Grid& grid, const SpaceTimeField& field, const WeightParams& p);

}  // namespace ancient
