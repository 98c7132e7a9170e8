#pragma once

#include <numbers>
#include <stdexcept>
#include <string>

namespace ancient {

// Error hierarchy. Every failure the library reports is one of these.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Query outside the truncated profile domain, or t outside an allowed range.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid sizes or parameters (grid sizes, weight exponents, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Normal graph leaves the embeddedness tube |u| sup|A| < 1/2.
class GraphDegenerateError : public Error {
 public:
  using Error::Error;
};

/// The highest retained angular mode still has a nonpositive eigenvalue.
class KTooSmallError : public Error {
 public:
  KTooSmallError(const std::string& what, int offending_k)
      : Error(what), k_(offending_k) {}
  int offending_mode() const { return k_; }

 private:
  int k_;
};

/// Picard iterate left the small ball where the nonlinear estimates hold.
class BallExitError : public Error {
 public:
  using Error::Error;
};

enum class Exec { serial, parallel };

/// Area of the unit sphere S^{n-1} in R^n.
double sphere_area(int n);

/// Number of linearly independent degree-k spherical harmonics on S^{n-1}.
int harmonic_dimension(int n, int k);

/// Eigenvalue k(k+n-2) of -Delta on S^{n-1} for degree-k harmonics.
inline double angular_eigenvalue(int n, int k) {
  return static_cast<double>(k) * (k + n - 2);
}

}  // namespace ancient
