#include "ancient/stencils.hpp"

#include <cmath>

#include "ancient/common.hpp"

namespace ancient {

double sphere_area(int n) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

int harmonic_dimension(int n, int k) {
  if (k < 0) return 0;
  if (n == 2) return k == 0 ? 1 : 2;
  // dim H_k(S^{n-1}) = C(k+n-1, n-1) - C(k+n-3, n-1)
  auto binom = [](int a, int b) -> long long {
    if (b < 0 || a < b) return 0;
    long long r = 1;
    for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
  };
  return static_cast<int>(binom(k + n - 1, n - 1) - binom(k + n - 3, n - 1));
}

std::vector<std::vector<double>> fd_weights(double z, std::span<const double> x,
                                            int max_order) {
  const int n = static_cast<int>(x.size());
  std::vector<std::vector<double>> c(max_order + 1, std::vector<double>(n, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, max_order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k)
        c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

UniformDerivatives::UniformDerivatives(int n_nodes) : n_(n_nodes) {
  if (n_nodes < 6) throw ParameterError("UniformDerivatives needs >= 6 nodes");
  std::vector<double> x(6);
  for (int i = 0; i < 6; ++i) x[i] = i;
  for (int node : {0, 1}) {
    auto w = fd_weights(static_cast<double>(node), x, 2);
    edge_.push_back({0, w[1], w[2]});
  }
  for (int node : {4, 5}) {
    auto w = fd_weights(static_cast<double>(node), x, 2);
    edge_.push_back({n_ - 6, w[1], w[2]});
  }
}

void UniformDerivatives::apply(std::span<const double> u, double h,
                               std::span<double> du,
                               std::span<double> d2u) const {
  const double ih = 1.0 / h;
  const double ih2 = ih * ih;
  for (int j = 2; j < n_ - 2; ++j) {
    du[j] = (u[j - 2] - 8.0 * u[j - 1] + 8.0 * u[j + 1] - u[j + 2]) * (ih / 12.0);
    d2u[j] = (-u[j - 2] + 16.0 * u[j - 1] - 30.0 * u[j] + 16.0 * u[j + 1] -
              u[j + 2]) *
             (ih2 / 12.0);
  }
  const int nodes[4] = {0, 1, n_ - 2, n_ - 1};
  for (int e = 0; e < 4; ++e) {
    const auto& sk = edge_[e];
    double a = 0.0, b = 0.0;
    for (int i = 0; i < 6; ++i) {
      a += sk.w1[i] * u[sk.first + i];
      b += sk.w2[i] * u[sk.first + i];
    }
    du[nodes[e]] = a * ih;
    d2u[nodes[e]] = b * ih2;
  }
}

}  // namespace ancient
