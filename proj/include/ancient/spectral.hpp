#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ancient/discretization.hpp"

namespace ancient {

/// Full eigendecomposition of one truncated mode operator. Columns of
/// `vectors` are orthonormal eigenvectors y of the symmetric form; the grid
/// function is phi = y / sqrt(W) on the active nodes.
struct ModeSpectrum {
  int k = 0;
  int first = 0;
  int multiplicity = 1;  // dim H_k(S^{n-1})
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  Eigen::VectorXd sqrt_mass;

  int dim() const { return static_cast<int>(values.size()); }
};

/// Eigendecomposition of mode k (Eigen's tridiagonal QL solver). Without
/// `vectors` only the eigenvalues are computed (O(n^2) instead of O(n^3)).
ModeSpectrum solve_mode(const Grid& grid, const ModeOperator& op, bool vectors = true);

/// Which modes get eigenvectors. `negative_modes` skips the vectors of modes
/// with no negative eigenvalue: enough for the index and the negative
/// eigenfunctions, not for the semigroup.
enum class Vectors { all, negative_modes };

/// Negative eigenpairs of -L across modes 0..K together with the full
/// spectra. Entries with k >= 1 are listed once per harmonic (m = 0..dim-1).
struct SpectralData {
  explicit SpectralData(Grid g) : grid(std::move(g)) {}

  Grid grid;
  std::vector<ModeSpectrum> modes;  // index k
  std::vector<double> lambdas;      // sorted increasingly, with multiplicity
  std::vector<int> mode_of;
  std::vector<int> harmonic_of;
  std::vector<ModeFunction> phis;   // radial profiles; Y_{k,m} normalized on S^{n-1}
  std::vector<double> residuals;    // ||L phi + lambda phi|| / max(1, |lambda|)

  int index() const { return static_cast<int>(lambdas.size()); }
  const ModeSpectrum& mode0() const { return modes.front(); }
  double lambda_min_nonneg() const;
  /// Eigenfunction i as an L^2(Sigma)-normalized grid function (k = 0 only).
  Eigen::VectorXd phi(int i) const;

  /// Axisymmetric grid function <-> coefficients in the mode-0 eigenbasis.
  Eigen::VectorXd to_coefficients(const Eigen::VectorXd& f) const;
  Eigen::VectorXd from_coefficients(const Eigen::VectorXd& c) const;
};

/// Negative count of a symmetric tridiagonal matrix by Sylvester inertia of
/// its LDL^T factorization (independent of any eigensolver).
int sturm_negative_count(const Eigen::VectorXd& diag, const Eigen::VectorXd& offdiag,
                         double shift = 0.0);

/// Throws KTooSmallError if the mode-K operator is not positive definite.
SpectralData negative_spectrum(const Grid& grid, Exec exec = Exec::parallel,
                               Vectors vectors = Vectors::all);

/// Smallest K >= 1 with a positive definite mode-K operator, plus `safety`.
int choose_K(const Grid& grid, int safety = 2, int k_max = 64);

struct IndexLadder {
  std::vector<double> S;
  std::vector<int> Ns;
  std::vector<int> index;
  std::vector<double> lambda1;  // NaN when the index is 0
  bool monotone = true;
  int final_index() const { return index.empty() ? 0 : index.back(); }
};

/// Index along the truncations S_ladder with the mesh width of `grid` held
/// fixed. Flags a decrease of the index along the ladder.
IndexLadder morse_index(const Grid& grid, const std::vector<double>& S_ladder);

/// Sum over eigenpairs with lambda < mu of <f, phi> phi (mode-0 functions).
Eigen::VectorXd project_below(const SpectralData& data, const Eigen::VectorXd& f, double mu);

/// sum_j a_j e^{-lambda_j t} phi_j. Components along non-axisymmetric
/// eigenfunctions must be zero.
Eigen::VectorXd iota_minus(const SpectralData& data, const Eigen::VectorXd& a, double t);
/// Mode-0 eigenbasis coefficients of iota_minus(a) at t = 0.
Eigen::VectorXd iota_coefficients(const SpectralData& data, const Eigen::VectorXd& a);

/// Heat semigroup e^{Lt} of the truncated operator by eigen-synthesis. The
/// exponential cache is lock-protected so concurrent calls are safe.
class Semigroup {
 public:
  explicit Semigroup(const SpectralData& data) : data_(data) {}

  const SpectralData& data() const { return data_; }
  Eigen::VectorXd apply(const Eigen::VectorXd& f, double t) const;

  /// G(x, y, t) for nodes x, y whose angular positions differ by gamma.
  double kernel(int x, int y, double t, double gamma = 0.0) const;
  /// G minus the contribution of the negative eigenvalues.
  double kernel_nonneg(int x, int y, double t, double gamma = 0.0) const;

 private:
  const Eigen::VectorXd& decay(int k, double t) const;
  double kernel_sum(int x, int y, double t, double gamma, bool skip_negative) const;

  const SpectralData& data_;
  mutable std::mutex mutex_;
  mutable std::map<std::pair<int, double>, Eigen::VectorXd> cache_;
};

inline Eigen::VectorXd semigroup_apply(const Semigroup& sg, const Eigen::VectorXd& f,
                                       double t) {
  return sg.apply(f, t);
}
inline double heat_kernel(const Semigroup& sg, int x, int y, double t) {
  return sg.kernel(x, y, t);
}

struct KernelSample {
  int x, y;
  double t;
  double d_xy, d_x, d_y;
  double g_nonneg;
};

struct KernelBoundReport {
  double delta = 0.0;
  double c = 0.0;  // c1 = c2
  double C = 0.0;
  std::vector<std::pair<double, double>> ladder;  // (c, C(c))
  double diagonal_neck = 0.0;                     // G^{>=0}(p, p, 1)
  std::vector<double> growth_t;
  std::vector<double> growth;                     // e^{-delta t} G^{>=0}(p, p, t)
  double gaussian_slope = 0.0;                    // fit of -log G vs d^2/t at t = 1
  std::vector<KernelSample> samples;
  bool pass = false;        // finite C with c > 0
  bool subchecks = false;   // diagonal finite, growth damped, Gaussian slope > 0
};

/// Samples `count` triples (x, y, t) with t in [1, 8] and fits the bound
/// G^{>=0} <= C e^{delta t}(e^{-c d(x,y)^2/t} + e^{-c d(x) - c d(y)}).
KernelBoundReport verify_kernel_bound(const Semigroup& sg, double delta, int count,
                                      std::uint64_t seed);

/// CSV (s, phi_i(s)) of the radial profile of eigenfunction i.
std::string eigenfunction_csv(const SpectralData& data, int i);

}  // namespace ancient
