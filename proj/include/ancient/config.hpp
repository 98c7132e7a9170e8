#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "ancient/common.hpp"

namespace ancient {

/// Malformed or inconsistent configuration (exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Tolerances of the verify battery; the [verify] section overrides them.
struct VerifyTolerances {
  double orthonormality = 1e-10;
  double eigen_residual = 1e-8;
  double semigroup = 1e-8;
  double projector = 1e-12;
  double quadratic_drift = 0.10;
  double mu_spread = 0.25;
  double contraction = 0.5;
  double decay_slope = 0.05;
  double uniqueness = 1e-10;
  int random_fields = 20;
  int kernel_samples = 200;
  int lipschitz_pairs = 50;
};

/// Every knob of a run. NaN entries take their defaults once the spectrum is
/// known: beta = n + 1/2, delta0 = -lambda_I / 2, T = 12 / (-lambda_I).
struct RunConfig {
  std::string surface = "catenoid";
  int n = 2;
  double S = 6.0;
  int Ns = 201;
  int K = 0;  // 0: smallest positive definite mode + 2
  double beta = std::numeric_limits<double>::quiet_NaN();
  double alpha = 0.5;
  double delta0 = std::numeric_limits<double>::quiet_NaN();
  double T = std::numeric_limits<double>::quiet_NaN();
  int M = 128;
  double tol = 1e-6;
  int max_iter = 20;
  double epsilon0 = 0.1;
  std::string out = "out";
  std::uint64_t seed = 1;
  bool dump = false;
  std::vector<double> a;
  std::string agrid;
  std::string resume;
  VerifyTolerances verify;

  /// Structural checks that need no spectrum. Throws ConfigError.
  void validate() const;
};

/// Reads a sectioned key = value file ([surface], [grid], [weights], [time],
/// [fixed_point], [output], [verify]). Unknown keys are errors.
RunConfig load_config(const std::string& path);

/// Comma-separated floats; throws ConfigError on garbage.
std::vector<double> parse_csv(const std::string& text);
/// Semicolon-separated list of comma-separated vectors.
std::vector<std::vector<double>> parse_agrid(const std::string& text);

/// Sectioned key = value text of the configuration (the echo in reports).
std::string config_text(const RunConfig& c);

}  // namespace ancient
