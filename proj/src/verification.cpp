#include "ancient/verification.hpp"

#include <cmath>

namespace ancient {

Eigen::VectorXd random_profile(const Grid& grid, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double S = grid.S;
  const double reach = std::min(S, 3.0);
  struct Bump {
    double c, center, width;
  };
  std::vector<Bump> bumps(4);
  for (auto& b : bumps) {
    b.c = unit(rng);
    b.center = 0.6 * reach * unit(rng);
    b.width = 0.4 + 0.3 * (unit(rng) + 1.0);
  }
  Eigen::VectorXd f(grid.Ns);
  for (int j = 0; j < grid.Ns; ++j) {
    const double s = grid.s[j];
    double v = 0.0;
    for (const auto& b : bumps) {
      const double x = (s - b.center) / b.width;
      v += b.c * std::exp(-x * x);
      if (grid.surface.has_axis()) {
        const double y = (-s - b.center) / b.width;
        v += b.c * std::exp(-y * y);
      }
    }
    const double taper = 1.0 - (s / S) * (s / S);
    f[j] = v * taper * taper;
  }
  return f;
}

Eigen::MatrixXd random_source(const Grid& grid, const TimeGrid& time, double delta0,
                              std::mt19937_64& rng) {
  std::uniform_real_distribution<double> freq(0.2, 2.0);
  const Eigen::VectorXd f = random_profile(grid, rng);
  const double w = freq(rng);
  Eigen::MatrixXd h(grid.Ns, time.size());
  for (int m = 0; m < time.size(); ++m) {
    const double t = time.t(m);
    h.col(m) = std::exp(2.0 * delta0 * t) * (1.0 + 0.5 * std::sin(w * t)) * f;
  }
  return h;
}

Manufactured manufactured_solution(const SpectralData& data, const TimeGrid& time, double gamma,
                                   bool discrete_space) {
  const Grid& g = data.grid;
  const double S = g.S, T = time.T();
  const double tail = std::exp(-S * S);
  Eigen::VectorXd X(g.Ns), LX(g.Ns);
  for (int j = 0; j < g.Ns; ++j) {
    const double s = g.s[j], e = std::exp(-s * s);
    const GraphJet jet{e - tail, -2.0 * s * e, (4.0 * s * s - 2.0) * e};
    X[j] = jet.u;
    LX[j] = jacobi_from_jet(g.jets[j], g.n(), jet);
  }
  X[0] = X[g.Ns - 1] = 0.0;
  LX[0] = LX[g.Ns - 1] = 0.0;
  if (discrete_space) LX = apply_jacobi(g, assemble_jacobi(g, 0), X);

  Manufactured out;
  Eigen::MatrixXd U(g.Ns, time.size()), Ut(g.Ns, time.size());
  out.h.resize(g.Ns, time.size());
  for (int m = 0; m < time.size(); ++m) {
    const double t = time.t(m), e = std::exp(gamma * t);
    const double A = (t + T) * (t + T) * e;
    const double At = (2.0 * (t + T) + gamma * (t + T) * (t + T)) * e;
    U.col(m) = A * X;
    Ut.col(m) = At * X;
    out.h.col(m) = At * X - A * LX;
  }
  out.exact = {time, U, Ut};
  const Eigen::VectorXd c = data.to_coefficients(U.col(time.M()));
  out.a = Eigen::VectorXd::Zero(data.index());
  int col = 0;
  for (int j = 0; j < data.index(); ++j)
    if (data.mode_of[j] == 0) out.a[j] = c[col++];
  return out;
}

double max_abs_difference(const SpaceTimeField& u, const SpaceTimeField& v) {
  return (u.values - v.values).cwiseAbs().maxCoeff();
}

double observed_order(const std::vector<double>& size, const std::vector<double>& err) {
  const std::size_t n = size.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(size[i]) / n;
    my += std::log(err[i]) / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(size[i]) - mx;
    sxy += dx * (std::log(err[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace ancient
