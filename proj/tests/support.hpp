#pragma once

#include <random>

#include <Eigen/Dense>

#include "ancient/flow.hpp"
#include "ancient/spectral.hpp"

namespace testing_support {

using namespace ancient;

inline Grid catenoid_grid(double S = 6.0, int Ns = 201, int K = 3) {
  return build_grid(Hypersurface::catenoid(), S, Ns, K);
}

inline Grid plane_grid(int n = 2, double S = 6.0, int Ns = 201, int K = 3) {
  return build_grid(Hypersurface::plane(n), S, Ns, K);
}

/// Random smooth profile vanishing near both ends.
inline Eigen::VectorXd smooth_random(const Grid& g, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double c1 = u(rng), c2 = u(rng), c3 = u(rng), w = 0.5 + 0.5 * (u(rng) + 1.0);
  Eigen::VectorXd f(g.Ns);
  for (int j = 0; j < g.Ns; ++j) {
    const double s = g.s[j], x = s / w;
    const double taper = 1.0 - (s / g.S) * (s / g.S);
    f[j] = scale * (c1 + c2 * x + c3 * x * x) * std::exp(-x * x) * taper * taper;
  }
  if (g.surface.has_axis())
    for (int j = 0; j < g.Ns; ++j) f[j] = 0.5 * (f[j] + f[g.Ns - 1 - j]);
  f[0] = f[g.Ns - 1] = 0.0;
  return f;
}

}  // namespace testing_support
