#include "ancient/norms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ancient/kernels.hpp"
#include "ancient/stencils.hpp"

namespace ancient {
namespace {

// Frame components of nabla^order u: column 0 is the profile-tangent part,
// column 1 (order 2 only) the rotation part with multiplicity n-1.
Eigen::MatrixXd frame_components(const Grid& grid, const Eigen::VectorXd& u, int order) {
  if (order == 0) return u;
  const SpatialDerivatives d = spatial_derivatives(grid, u);
  if (order == 1) return d.grad;
  Eigen::MatrixXd c(grid.Ns, 2);
  c.col(0) = d.hess_tt;
  c.col(1) = d.hess_ee;
  return c;
}

double component_distance(const Eigen::MatrixXd& a, int i, const Eigen::MatrixXd& b, int j,
                          int n) {
  if (a.cols() == 1) return std::abs(a(i, 0) - b(j, 0));
  const double tt = a(i, 0) - b(j, 0), ee = a(i, 1) - b(j, 1);
  return std::sqrt(tt * tt + (n - 1) * ee * ee);
}

double pair_sup(const Grid& grid, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                double tau, double alpha, double beta_eff) {
  const int n = grid.n();
  const double time_gap = std::pow(tau, 0.5 * alpha);
  const double time_rho = std::sqrt(tau);
  double best = 0.0;
  auto visit = [&](int i, int j) {
    const double d = grid.distance(i, j);
    const double denom = std::pow(d, alpha) + time_gap;
    if (denom == 0.0) return;
    const double w = std::pow(grid.rho[i] + grid.rho[j] + time_rho, beta_eff);
    best = std::max(best, w * component_distance(a, i, b, j, n) / denom);
  };
  if (tau > 0.0)
    for (int i = 0; i < grid.Ns; ++i) visit(i, i);
  for (int sep = 1; sep < grid.Ns; sep *= 2) {
    bool any = false;
    for (int i = 0; i + sep < grid.Ns; ++i) {
      if (grid.distance(i, i + sep) > grid.holder_radius) continue;
      any = true;
      visit(i, i + sep);
      if (tau > 0.0) visit(i + sep, i);
    }
    if (!any) break;
  }
  return best;
}

}  // namespace

void WeightParams::validate(int n, double lambda_I, int index) const {
  if (!(beta > n)) throw ParameterError("beta must exceed n");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie in (0, 1)");
  if (!(delta0 > 0.0)) throw ParameterError("delta0 must be positive");
  if (index > 0 && !(delta0 < -lambda_I))
    throw ParameterError("delta0 must be below -lambda_I");
}

TimeGrid::TimeGrid(double T, int M) : T_(T), M_(M) {
  if (!(T > 0.0)) throw ParameterError("T must be positive");
  if (M < 2) throw ParameterError("M must be >= 2");
}

Eigen::MatrixXd time_derivative(const TimeGrid& time, const Eigen::MatrixXd& U) {
  const int M = time.M();
  const double dt = time.dt();
  Eigen::MatrixXd D(U.rows(), U.cols());
  D.col(0) = (-3.0 * U.col(0) + 4.0 * U.col(1) - U.col(2)) / (2.0 * dt);
  for (int m = 1; m < M; ++m) D.col(m) = (U.col(m + 1) - U.col(m - 1)) / (2.0 * dt);
  D.col(M) = (3.0 * U.col(M) - 4.0 * U.col(M - 1) + U.col(M - 2)) / (2.0 * dt);
  return D;
}

SpaceTimeField SpaceTimeField::zero(const TimeGrid& time, int Ns) {
  return {time, Eigen::MatrixXd::Zero(Ns, time.size()), Eigen::MatrixXd::Zero(Ns, time.size())};
}

SpaceTimeField SpaceTimeField::from_values(const TimeGrid& time, Eigen::MatrixXd values) {
  Eigen::MatrixXd d = time_derivative(time, values);
  return {time, std::move(values), std::move(d)};
}

SpatialDerivatives spatial_derivatives(const Grid& grid, const Eigen::VectorXd& u) {
  const UniformDerivatives D(grid.Ns);
  Eigen::VectorXd du(grid.Ns), d2u(grid.Ns);
  D.apply(std::span<const double>(u.data(), u.size()), grid.h,
          std::span<double>(du.data(), du.size()), std::span<double>(d2u.data(), d2u.size()));
  SpatialDerivatives out{Eigen::VectorXd(grid.Ns), Eigen::VectorXd(grid.Ns),
                         Eigen::VectorXd(grid.Ns), Eigen::VectorXd(grid.Ns)};
  for (int j = 0; j < grid.Ns; ++j) {
    const CovariantJet c = covariant_jet(grid.jets[j], grid.n(), {u[j], du[j], d2u[j]});
    out.grad[j] = c.grad;
    out.hess_tt[j] = c.hess_tt;
    out.hess_ee[j] = c.hess_ee;
    out.hess[j] = c.hess_norm(grid.n());
  }
  return out;
}

double weighted_c0(const Grid& grid, const Eigen::VectorXd& u, double beta) {
  double best = 0.0;
  for (int j = 0; j < grid.Ns; ++j) best = std::max(best, std::pow(grid.rho[j], beta) * std::abs(u[j]));
  return best;
}

double weighted_ck(const Grid& grid, const Eigen::VectorXd& u, int k, double beta) {
  if (k < 0 || k > 2) throw ParameterError("weighted_ck supports k = 0, 1, 2");
  double total = weighted_c0(grid, u, beta);
  if (k == 0) return total;
  const SpatialDerivatives d = spatial_derivatives(grid, u);
  total += weighted_c0(grid, d.grad, beta + 1.0);
  if (k == 2) total += weighted_c0(grid, d.hess, beta + 2.0);
  return total;
}

double weighted_ck(const Grid& grid, const SpaceTimeField& field, int k, double beta) {
  if (k < 0 || k > 2) throw ParameterError("weighted_ck supports k = 0, 1, 2");
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, st = 0.0;
  for (int m = 0; m < field.time.size(); ++m) {
    const Eigen::VectorXd u = field.values.col(m);
    s0 = std::max(s0, weighted_c0(grid, u, beta));
    if (k >= 1) {
      const SpatialDerivatives d = spatial_derivatives(grid, u);
      s1 = std::max(s1, weighted_c0(grid, d.grad, beta + 1.0));
      if (k == 2) {
        s2 = std::max(s2, weighted_c0(grid, d.hess, beta + 2.0));
        st = std::max(st, weighted_c0(grid, field.dt_values.col(m), beta + 2.0));
      }
    }
  }
  return s0 + s1 + s2 + st;
}

double holder_seminorm(const Grid& grid, const SpaceTimeField& field, int order, double alpha,
                       double beta_eff) {
  const int S = field.time.size();
  std::vector<Eigen::MatrixXd> comp(S);
  for (int m = 0; m < S; ++m) comp[m] = frame_components(grid, field.values.col(m), order);
  const double dt = field.time.dt();
  double best = 0.0;
  for (int m = 0; m < S; ++m)
    for (int off : {0, 1, 4}) {
      if (m + off >= S) continue;
      best = std::max(best, pair_sup(grid, comp[m], comp[m + off], off * dt, alpha, beta_eff));
    }
  return best;
}

double holder_seminorm(const Grid& grid, const Eigen::VectorXd& u, int order, double alpha,
                       double beta_eff) {
  const Eigen::MatrixXd c = frame_components(grid, u, order);
  return pair_sup(grid, c, c, 0.0, alpha, beta_eff);
}

double holder_norm(const Grid& grid, const Eigen::VectorXd& u, int k, double alpha, double beta) {
  return weighted_ck(grid, u, k, beta) + holder_seminorm(grid, u, k, alpha, beta + k + alpha);
}

double star_slice(const Grid& grid, const SpaceTimeField& field, const WeightParams& p, int m) {
  const double t = field.time.t(m);
  return std::exp(-p.delta0 * t) *
         (holder_norm(grid, field.values.col(m), 2, p.alpha, p.beta) +
          holder_norm(grid, field.dt_values.col(m), 0, p.alpha, p.beta + 2.0));
}

double star_norm(const Grid& grid, const SpaceTimeField& field, const WeightParams& p) {
  const std::vector<double> s = star_slices(grid, field, p, Exec::parallel);
  return *std::max_element(s.begin(), s.end());
}

double weighted_l2(const Grid& grid, const Eigen::VectorXd& u, double beta) {
  const int n = grid.n();
  double acc = 0.0;
  for (int j = 0; j < grid.Ns; ++j) {
    const double w = std::pow(grid.rho[j], beta) * u[j];
    acc += grid.weight[j] * w * w * std::pow(grid.rho[j], -n);
  }
  return std::sqrt(sphere_area(n) * acc);
}

std::string norm_trace_csv(const Grid& grid, const SpaceTimeField& field, const WeightParams& p) {
  const std::vector<double> s = star_slices(grid, field, p, Exec::parallel);
  std::ostringstream os;
  os.precision(17);
  os << "t,weighted_norm\n";
  for (int m = 0; m < field.time.size(); ++m) os << field.time.t(m) << ',' << s[m] << '\n';
  return os.str();
}

}  // namespace ancient
