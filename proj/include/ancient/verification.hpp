#pragma once

#include <random>

#include <Eigen/Dense>

#include "ancient/flow.hpp"

namespace ancient {

/// Sum of a few Gaussian bumps, tapered to zero at s = +-S (even for the plane).
Eigen::VectorXd random_profile(const Grid& grid, std::mt19937_64& rng);

/// Random source e^{2 delta0 t}(1 + 0.5 sin(w t)) f(s) on the time grid.
Eigen::MatrixXd random_source(const Grid& grid, const TimeGrid& time, double delta0,
                              std::mt19937_64& rng);

/// u*(s, t) = (t + T)^2 e^{gamma t} X(s), X = e^{-s^2} - e^{-S^2}, with the
/// source h = d_t u* - L u* evaluated from the exact derivatives of X and
/// terminal data a = negative-mode coefficients of u*(0). With
/// `discrete_space` the source uses the assembled operator instead, so u* is
/// the exact semi-discrete solution and only the time error remains.
struct Manufactured {
  SpaceTimeField exact;
  Eigen::MatrixXd h;
  Eigen::VectorXd a;
};

Manufactured manufactured_solution(const SpectralData& data, const TimeGrid& time, double gamma,
                                   bool discrete_space = false);

/// max over space-time of |u - v|.
double max_abs_difference(const SpaceTimeField& u, const SpaceTimeField& v);

/// Least-squares slope of log(err) against log(size).
double observed_order(const std::vector<double>& size, const std::vector<double>& err);

}  // namespace ancient
