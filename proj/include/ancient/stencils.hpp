#pragma once

#include <span>
#include <vector>

namespace ancient {

/// Finite-difference weights for derivatives of order 0..max_order at z from
/// values at the nodes x (Fornberg's recursion). Result[m][j] multiplies f(x[j])
/// in the approximation of the m-th derivative.
std::vector<std::vector<double>> fd_weights(double z, std::span<const double> x,
                                            int max_order);

/// First and second derivatives of uniformly sampled data, fourth order in
/// the spacing h. Interior nodes use centered five-point stencils; the two
/// nodes at each end use skewed six-point stencils of the same order.
struct UniformDerivatives {
  explicit UniformDerivatives(int n_nodes);

  void apply(std::span<const double> u, double h, std::span<double> du,
             std::span<double> d2u) const;

  int size() const { return n_; }

 private:
  int n_;
  // offsets/weights for the four one-sided nodes (0, 1, n-2, n-1)
  struct Skewed {
    int first;
    std::vector<double> w1, w2;
  };
  std::vector<Skewed> edge_;
};

}  // namespace ancient
