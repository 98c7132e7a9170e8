#include "ancient/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ancient/graph.hpp"
#include "ancient/kernels.hpp"

namespace ancient {
namespace {

// Coefficients sqrt|S^{n-1}| sum_j V(j,i) sqrt(W_j) f_j, summed in either order.
Eigen::VectorXd project(const SpectralData& data, const Eigen::VectorXd& f, bool reverse) {
  const ModeSpectrum& m0 = data.mode0();
  const int d = m0.dim();
  const double scale = std::sqrt(sphere_area(data.grid.n()));
  Eigen::VectorXd w(d);
  for (int j = 0; j < d; ++j) w[j] = f[m0.first + j] * m0.sqrt_mass[j];
  Eigen::VectorXd c(d);
  for (int i = 0; i < d; ++i) {
    double acc = 0.0;
    if (reverse) {
      for (int j = d - 1; j >= 0; --j) acc += m0.vectors(j, i) * w[j];
    } else {
      for (int j = 0; j < d; ++j) acc += m0.vectors(j, i) * w[j];
    }
    c[i] = acc * scale;
  }
  return c;
}

Eigen::VectorXd synthesize(const SpectralData& data, const Eigen::VectorXd& c, bool reverse) {
  const ModeSpectrum& m0 = data.mode0();
  const Grid& g = data.grid;
  const int d = m0.dim();
  const double scale = std::sqrt(sphere_area(g.n()));
  Eigen::VectorXd out = Eigen::VectorXd::Zero(g.Ns);
  for (int j = 0; j < d; ++j) {
    double acc = 0.0;
    if (reverse) {
      for (int i = d - 1; i >= 0; --i) acc += m0.vectors(j, i) * c[i];
    } else {
      for (int i = 0; i < d; ++i) acc += m0.vectors(j, i) * c[i];
    }
    out[m0.first + j] = acc / (m0.sqrt_mass[j] * scale);
  }
  if (g.surface.has_axis()) {
    const int mid = g.neck_index();
    for (int i = 1; i <= mid; ++i) out[mid - i] = out[mid + i];
  }
  return out;
}

double series(double z, int offset) {
  // sum_k z^k / (k + offset)!
  double term = 1.0, sum = 0.0;
  for (int k = 1; k <= offset; ++k) term /= k;
  for (int k = 0; k < 20; ++k) {
    sum += term;
    term *= z / (k + offset + 1);
  }
  return sum;
}

SpaceTimeField difference(const SpaceTimeField& a, const SpaceTimeField& b) {
  return {a.time, a.values - b.values, a.dt_values - b.dt_values};
}

}  // namespace

double phi1(double z) {
  if (std::abs(z) < 0.1) return series(z, 1);
  return std::expm1(z) / z;
}

double phi2(double z) {
  if (std::abs(z) < 0.1) return series(z, 2);
  return (std::expm1(z) - z) / (z * z);
}

LinearSolver::LinearSolver(const SpectralData& data, const TimeGrid& time)
    : data_(data), time_(time) {}

double LinearSolver::tail_bound(double delta0) const {
  return std::exp(-(delta0 + data_.lambda_min_nonneg()) * time_.T());
}

SpaceTimeField LinearSolver::solve(const Eigen::MatrixXd& h, const Eigen::VectorXd& a,
                                   bool reverse) const {
  const Grid& grid = data_.grid;
  const int S = time_.size();
  if (h.rows() != grid.Ns || h.cols() != S) throw ParameterError("source has the wrong shape");
  const ModeSpectrum& m0 = data_.mode0();
  const int d = m0.dim();
  const double dt = time_.dt();

  Eigen::MatrixXd g(d, S);
  for (int m = 0; m < S; ++m) g.col(m) = project(data_, h.col(m), reverse);
  const Eigen::VectorXd terminal = iota_coefficients(data_, a);

  Eigen::MatrixXd c(d, S);
  for (int i = 0; i < d; ++i) {
    const double mu = m0.values[i];
    if (mu < 0.0) {
      const double w = mu * dt;
      const double e = std::exp(w), p1 = phi1(w), p12 = p1 - phi2(w);
      c(i, S - 1) = terminal[i];
      for (int m = S - 2; m >= 0; --m)
        c(i, m) = e * c(i, m + 1) - dt * (p1 * g(i, m) + p12 * (g(i, m + 1) - g(i, m)));
    } else {
      const double z = -mu * dt;
      const double e = std::exp(z), p1 = phi1(z), p2 = phi2(z);
      c(i, 0) = 0.0;
      for (int m = 0; m + 1 < S; ++m)
        c(i, m + 1) = e * c(i, m) + dt * (p1 * g(i, m) + p2 * (g(i, m + 1) - g(i, m)));
    }
  }

  Eigen::MatrixXd U(grid.Ns, S);
  for (int m = 0; m < S; ++m) U.col(m) = synthesize(data_, c.col(m), reverse);
  return SpaceTimeField::from_values(time_, std::move(U));
}

void check_growth(const Grid& grid, const LinearProblem& problem) {
  const TimeGrid& time = problem.time;
  const WeightParams& p = problem.params;
  double older = 0.0, newer = 0.0;
  for (int m = 0; m < time.size(); ++m) {
    const Eigen::VectorXd hm = problem.h.col(m);
    if (!hm.allFinite()) throw GrowthError("source has non-finite values at t = " +
                                           std::to_string(time.t(m)));
    const double v =
        std::exp(-2.0 * p.delta0 * time.t(m)) * holder_norm(grid, hm, 0, p.alpha, p.beta + 2.0);
    if (!std::isfinite(v)) throw GrowthError("weighted source norm overflows");
    if (time.t(m) <= -0.5 * time.T()) {
      older = std::max(older, v);
    } else {
      newer = std::max(newer, v);
    }
  }
  if (newer > 0.0 && older > 1e6 * newer) {
    std::ostringstream os;
    os << "source grows too fast backward in time: sup e^{-2 delta0 t}||h|| is " << older
       << " on [-T, -T/2] against " << newer << " on (-T/2, 0]";
    throw GrowthError(os.str());
  }
}

SpaceTimeField solve_linear(const SpectralData& data, const LinearProblem& problem,
                            bool reverse) {
  check_growth(data.grid, problem);
  return LinearSolver(data, problem.time).solve(problem.h, problem.a, reverse);
}

SpaceTimeField iota_field(const SpectralData& data, const Eigen::VectorXd& a,
                          const TimeGrid& time) {
  Eigen::MatrixXd U(data.grid.Ns, time.size());
  for (int m = 0; m < time.size(); ++m) U.col(m) = iota_minus(data, a, time.t(m));
  return SpaceTimeField::from_values(time, std::move(U));
}

DecayReport l2_decay_check(const SpectralData& data, const SpaceTimeField& u,
                           const Eigen::MatrixXd& h, const Eigen::VectorXd& a,
                           const WeightParams& p) {
  const TimeGrid& time = u.time;
  const SpaceTimeField iota = iota_field(data, a, time);
  DecayReport r;
  double integral = 0.0;
  for (int m = 0; m < time.size(); ++m) {
    const double t = time.t(m);
    const Eigen::VectorXd diff = u.values.col(m) - iota.values.col(m);
    r.lhs = std::max(r.lhs, std::exp(-p.delta0 * t) * l2_norm(data.grid, diff));
    const double hv = std::exp(-2.0 * p.delta0 * t) * l2_norm(data.grid, h.col(m));
    const double w = (m == 0 || m == time.M()) ? 0.5 : 1.0;
    integral += w * time.dt() * hv * hv;
  }
  r.rhs = std::sqrt(integral);
  r.ratio = (r.rhs > 0.0) ? r.lhs / r.rhs : 0.0;
  r.finite = std::isfinite(r.ratio) && !(r.rhs == 0.0 && r.lhs > 0.0);
  return r;
}

DecayReport weighted_decay_check(const SpectralData& data, const SpaceTimeField& u,
                                 const Eigen::MatrixXd& h, const Eigen::VectorXd& a,
                                 const WeightParams& p) {
  const TimeGrid& time = u.time;
  const SpaceTimeField iota = iota_field(data, a, time);
  DecayReport r;
  for (int m = 0; m < time.size(); ++m) {
    const double t = time.t(m);
    const Eigen::VectorXd diff = u.values.col(m) - iota.values.col(m);
    r.lhs = std::max(r.lhs,
                     std::exp(-p.delta0 * t) * holder_norm(data.grid, diff, 2, p.alpha, p.beta));
    r.rhs = std::max(r.rhs, std::exp(-2.0 * p.delta0 * t) *
                                holder_norm(data.grid, h.col(m), 0, p.alpha, p.beta + 2.0));
  }
  r.ratio = (r.rhs > 0.0) ? r.lhs / r.rhs : 0.0;
  r.finite = std::isfinite(r.ratio) && !(r.rhs == 0.0 && r.lhs > 0.0);
  return r;
}

double ball_radius(const Grid& grid) {
  const double A = sup_A(grid);
  return A > 0.0 ? std::min(0.1, 1.0 / (4.0 * A)) : 0.1;
}

double c2_norm(const Grid& grid, const SpaceTimeField& u) {
  double best = 0.0;
  for (int m = 0; m < u.time.size(); ++m)
    best = std::max(best, weighted_ck(grid, Eigen::VectorXd(u.values.col(m)), 2, 0.0));
  return best;
}

SpaceTimeField fixed_point_map(const LinearSolver& solver, const SpaceTimeField& u,
                               const Eigen::VectorXd& a, bool reverse) {
  const Grid& grid = solver.data().grid;
  const double norm = c2_norm(grid, u);
  const double eta = ball_radius(grid);
  if (!(norm <= eta)) {
    std::ostringstream os;
    os << "iterate left the ball: ||u||_{C^2_0} = " << norm << " > eta = " << eta;
    throw BallExitError(os.str());
  }
  const Eigen::MatrixXd E = nonlinear_error_slices(grid, u.values, Exec::parallel);
  return solver.solve(E, a, reverse);
}

AncientFlow construct_ancient_flow(const LinearSolver& solver, const Eigen::VectorXd& a,
                                   const PicardOptions& opt,
                                   const std::optional<PicardState>& resume,
                                   const std::function<void(const PicardState&)>& on_iterate) {
  const SpectralData& data = solver.data();
  const TimeGrid& time = solver.time();
  AncientFlow flow;
  flow.a = a;
  flow.tail_bound = solver.tail_bound(opt.params.delta0);

  PicardState state;
  if (resume) {
    state = *resume;
    if (state.u.rows() != data.grid.Ns || state.u.cols() != time.size())
      throw ParameterError("checkpoint does not match the grid");
  } else {
    state.u = iota_field(data, a, time).values;
  }
  SpaceTimeField u = SpaceTimeField::from_values(time, state.u);

  const bool done_already =
      !state.history.empty() && state.history.back() < opt.tol;
  while (!done_already && state.iteration < opt.max_iter) {
    SpaceTimeField next = fixed_point_map(solver, u, a, opt.reverse);
    const double step = star_norm(data.grid, difference(next, u), opt.params);
    u = std::move(next);
    state.u = u.values;
    state.history.push_back(step);
    ++state.iteration;
    if (on_iterate) on_iterate(state);
    if (step < opt.tol) break;
  }
  flow.u = std::move(u);
  flow.history = state.history;
  flow.iterations = state.iteration;
  flow.converged = !state.history.empty() && state.history.back() < opt.tol;
  for (std::size_t k = 1; k < flow.history.size(); ++k) {
    // Steps already at the round-off floor say nothing about contraction.
    if (flow.history[k] < 10.0 * opt.tol) break;
    flow.contraction = std::max(flow.contraction, flow.history[k] / flow.history[k - 1]);
  }
  return flow;
}

EpsilonSearch find_epsilon(const LinearSolver& solver, const Eigen::VectorXd& direction,
                           double epsilon0, const PicardOptions& opt, int max_halvings) {
  EpsilonSearch out;
  double eps = epsilon0;
  for (int k = 0; k <= max_halvings; ++k, eps *= 0.5) {
    std::ostringstream os;
    os << "epsilon = " << eps << ": ";
    try {
      const AncientFlow flow = construct_ancient_flow(solver, eps * direction, opt);
      if (flow.converged && flow.contraction < 0.5) {
        out.epsilon = eps;
        out.halvings = k;
        os << "converged in " << flow.iterations << " iterations, contraction "
           << flow.contraction;
        out.log.push_back(os.str());
        return out;
      }
      os << (flow.converged ? "contraction " : "no convergence, contraction ") << flow.contraction;
    } catch (const BallExitError& e) {
      os << e.what();
    } catch (const GraphDegenerateError& e) {
      os << e.what();
    }
    out.log.push_back(os.str());
  }
  out.halvings = max_halvings;
  return out;
}

ResidualReport mcf_residual(const Grid& grid, const SpaceTimeField& u) {
  const Eigen::MatrixXd speed = graph_speed_slices(grid, u.values, Exec::parallel);
  ResidualReport r;
  r.field = Eigen::MatrixXd::Zero(grid.Ns, u.time.size());
  for (int m = 1; m < u.time.size(); ++m)
    for (int j = 2; j < grid.Ns - 2; ++j) {
      r.field(j, m) = std::abs(u.dt_values(j, m) - speed(j, m));
      r.sup = std::max(r.sup, r.field(j, m));
    }
  return r;
}

DecayFit decay_rate(const SpectralData& data, const AncientFlow& flow) {
  DecayFit fit;
  int lead = -1;
  for (int j = 0; j < flow.a.size(); ++j)
    if (flow.a[j] != 0.0) {
      lead = j;
      break;
    }
  if (lead < 0) {
    fit.underflow = true;
    return fit;
  }
  fit.expected = -data.lambdas[lead];
  const TimeGrid& time = flow.u.time;
  std::vector<double> ts, ys;
  for (int m = 0; m < time.size() && time.t(m) <= -0.5 * time.T(); ++m) {
    const double v = l2_norm(data.grid, flow.u.values.col(m));
    if (!(v >= 1e-14)) {
      fit.underflow = true;
      return fit;
    }
    ts.push_back(time.t(m));
    ys.push_back(std::log(v));
  }
  const double n = static_cast<double>(ts.size());
  double mt = 0.0, my = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    mt += ts[i] / n;
    my += ys[i] / n;
  }
  double sty = 0.0, stt = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    sty += (ts[i] - mt) * (ys[i] - my);
    stt += (ts[i] - mt) * (ts[i] - mt);
  }
  fit.slope = sty / stt;
  return fit;
}

double mu_estimate(const SpectralData& data, const AncientFlow& flow, const WeightParams& p) {
  const double a2 = flow.a.squaredNorm();
  if (a2 == 0.0) return 0.0;
  const SpaceTimeField iota = iota_field(data, flow.a, flow.u.time);
  return star_norm(data.grid, difference(flow.u, iota), p) / a2;
}

std::string flow_csv(const Grid& grid, const SpaceTimeField& u) {
  std::ostringstream os;
  os.precision(17);
  os << "t,s,u\n";
  for (int m = 0; m < u.time.size(); ++m)
    for (int j = 0; j < grid.Ns; ++j)
      os << u.time.t(m) << ',' << grid.s[j] << ',' << u.values(j, m) << '\n';
  return os.str();
}

}  // namespace ancient
