#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ancient/norms.hpp"
#include "ancient/spectral.hpp"

namespace ancient {

/// Source h violates the growth hypothesis sup e^{-2 delta0 t} ||h|| < inf.
class GrowthError : public Error {
 public:
  using Error::Error;
};

/// (d/dt - L) u = h on Sigma x [-T, 0] with Pi_{<0} u(0) = iota_minus(a)(0).
struct LinearProblem {
  Eigen::MatrixXd h;  // columns are time slices
  Eigen::VectorXd a;
  WeightParams params;
  TimeGrid time;
};

/// Duhamel solver in the mode-0 eigenbasis. Negative modes are integrated
/// backward from their terminal value, the rest forward from zero at -T; on
/// each step h is linear in time and the integral is exact (phi-functions).
class LinearSolver {
 public:
  LinearSolver(const SpectralData& data, const TimeGrid& time);

  /// `reverse` runs the mode synthesis in the opposite summation order.
  SpaceTimeField solve(const Eigen::MatrixXd& h, const Eigen::VectorXd& a,
                       bool reverse = false) const;

  /// exp(-(delta0 + lambda_min^+) T): the dropped tail of the Duhamel integral.
  double tail_bound(double delta0) const;

  const SpectralData& data() const { return data_; }
  const TimeGrid& time() const { return time_; }

 private:
  const SpectralData& data_;
  TimeGrid time_;
};

/// phi_1(z) = (e^z - 1)/z and phi_2(z) = (e^z - 1 - z)/z^2, series near 0.
double phi1(double z);
double phi2(double z);

/// Throws GrowthError for non-finite h or when e^{-2 delta0 t}||h|| on the
/// older half of the time grid exceeds 1e6 times its sup on the newer half.
void check_growth(const Grid& grid, const LinearProblem& problem);

SpaceTimeField solve_linear(const SpectralData& data, const LinearProblem& problem,
                            bool reverse = false);

/// iota_minus(a) sampled on the time grid.
SpaceTimeField iota_field(const SpectralData& data, const Eigen::VectorXd& a,
                          const TimeGrid& time);

struct DecayReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;  // 0 when both sides vanish
  bool finite = true;
};

/// sup_t e^{-delta0 t}||u - iota(a)||_{L^2} against
/// (int e^{-4 delta0 s}||h||_{L^2}^2 ds)^{1/2}.
DecayReport l2_decay_check(const SpectralData& data, const SpaceTimeField& u,
                           const Eigen::MatrixXd& h, const Eigen::VectorXd& a,
                           const WeightParams& p);

/// sup_t e^{-delta0 t}||u - iota(a)||_{C^{2,alpha}_beta} against
/// sup_t e^{-2 delta0 t}||h||_{C^{0,alpha}_{beta+2}}.
DecayReport weighted_decay_check(const SpectralData& data, const SpaceTimeField& u,
                                 const Eigen::MatrixXd& h, const Eigen::VectorXd& a,
                                 const WeightParams& p);

/// min(0.1, 1/(4 sup|A|)).
double ball_radius(const Grid& grid);
/// max over slices of ||u||_{C^2_0}.
double c2_norm(const Grid& grid, const SpaceTimeField& u);

/// S(u; a): solve_linear with h = E(u). Throws BallExitError when
/// ||u||_{C^2_0} exceeds the ball radius.
SpaceTimeField fixed_point_map(const LinearSolver& solver, const SpaceTimeField& u,
                               const Eigen::VectorXd& a, bool reverse = false);

struct PicardOptions {
  double tol = 1e-6;
  int max_iter = 20;
  bool reverse = false;
  WeightParams params;
};

struct PicardState {
  int iteration = 0;
  Eigen::MatrixXd u;
  std::vector<double> history;
};

struct AncientFlow {
  Eigen::VectorXd a;
  SpaceTimeField u;
  std::vector<double> history;  // ||u_{m+1} - u_m||_*
  int iterations = 0;
  bool converged = false;
  double contraction = 0.0;  // max ratio of successive history entries
  double tail_bound = 0.0;
};

/// Picard iteration u_0 = iota(a), u_{m+1} = S(u_m; a). `resume` restarts
/// from a saved iterate; `on_iterate` sees the state after every step.
AncientFlow construct_ancient_flow(const LinearSolver& solver, const Eigen::VectorXd& a,
                                   const PicardOptions& opt,
                                   const std::optional<PicardState>& resume = std::nullopt,
                                   const std::function<void(const PicardState&)>& on_iterate = {});

struct EpsilonSearch {
  double epsilon = 0.0;
  int halvings = 0;
  std::vector<std::string> log;
};

/// Halves epsilon0 until a = epsilon * direction converges with contraction
/// ratio < 1/2 inside the ball.
EpsilonSearch find_epsilon(const LinearSolver& solver, const Eigen::VectorXd& direction,
                           double epsilon0, const PicardOptions& opt, int max_halvings = 12);

struct ResidualReport {
  Eigen::MatrixXd field;  // |d_t u - v H_Gamma| on the checked nodes, zero elsewhere
  double sup = 0.0;
};

/// Excludes two nodes at each end and the first time slice.
ResidualReport mcf_residual(const Grid& grid, const SpaceTimeField& u);

struct DecayFit {
  double slope = 0.0;
  double expected = 0.0;  // -lambda of the leading excited mode
  bool underflow = false;
};

/// Least-squares slope of log||u(t)||_{L^2} over [-T, -T/2].
DecayFit decay_rate(const SpectralData& data, const AncientFlow& flow);

/// ||u - iota(a)||_* / |a|^2.
double mu_estimate(const SpectralData& data, const AncientFlow& flow, const WeightParams& p);

/// Rows (t, s, u) of the flow.
std::string flow_csv(const Grid& grid, const SpaceTimeField& u);

}  // namespace ancient
