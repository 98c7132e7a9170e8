#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ancient/geometry.hpp"

namespace ancient {

/// Uniform profile grid on [-S, S] with the data every other module reads:
/// profile jets, quadrature weights, and the radial weight rho.
struct Grid {
  explicit Grid(Hypersurface surf) : surface(surf) {}

  Hypersurface surface;
  double S = 0.0;
  int Ns = 0;
  int K = 0;
  double h = 0.0;

  std::vector<double> s;
  std::vector<ProfileJet> jets;
  std::vector<double> area;     // area element sqrt(g) r^{n-1}
  std::vector<double> weight;   // profile quadrature weights (angular factor excluded)
  std::vector<double> A2;       // |A|^2
  std::vector<double> arclength;  // signed geodesic coordinate along the profile from the neck
  std::vector<double> rho;      // (1 + d(x,p)^2)^{1/2}
  std::vector<double> r_euclid; // 1 + |x|

  double holder_radius = 1.0;   // delta(g)

  int n() const { return surface.n(); }
  int size() const { return Ns; }
  /// Index range [first, last] of nodes carrying unknowns for mode k.
  int first_active(int k) const;
  int last_active() const { return Ns - 2; }
  /// Index of the neck (s = 0) node, or -1 if the grid has none.
  int neck_index() const;
  /// Node closest to the base point p (the neck, or the axis of the plane).
  int base_node() const;
  /// Geodesic distance between two nodes along the profile.
  double distance(int i, int j) const;
};

/// Throws ParameterError on invalid sizes. For the plane N_s must be odd so the
/// axis is a grid node.
Grid build_grid(const Hypersurface& surface, double S, int Ns, int K);

/// Discrete -L_k = -(Delta_k + |A|^2) on the active nodes of mode k, in the
/// symmetric form B = W^{-1/2} Kstiff W^{-1/2} + diag(q). Eigenvectors y of B
/// map to grid functions phi = W^{-1/2} y with sum_j W_j phi_j^2 = 1.
///
/// The zeroth-order coefficient is the pointwise potential l_k/r^2 - |A|^2 with
/// |A|^2 replaced by its discrete counterpart calibrated on the translation
/// Jacobi field nu_r (so the discrete mode-1 operator annihilates it exactly).
struct ModeOperator {
  int k = 0;
  int first = 0;  // grid index of the first unknown
  Eigen::VectorXd diag;
  Eigen::VectorXd offdiag;
  Eigen::VectorXd mass;       // W_j for the unknowns
  Eigen::VectorXd stiff_diag;  // tridiagonal stiffness (before the similarity)
  Eigen::VectorXd stiff_off;
  Eigen::VectorXd potential;   // q_j

  int dim() const { return static_cast<int>(diag.size()); }
  Eigen::MatrixXd dense_symmetric() const;
  /// (-L_k u) on the full grid; zero outside the active range.
  Eigen::VectorXd apply(const Grid& grid, const Eigen::VectorXd& u) const;
};

ModeOperator assemble_jacobi(const Grid& grid, int k);

/// Discrete Jacobi operator L_h u = (Delta + |A|^2) u on axisymmetric grid
/// functions (mode 0). Boundary rows are zero.
Eigen::VectorXd apply_jacobi(const Grid& grid, const ModeOperator& mode0,
                             const Eigen::VectorXd& u);

/// L^2(Sigma) inner product of two axisymmetric grid functions: trapezoidal
/// quadrature on the profile times the area of S^{n-1}.
double l2_inner(const Grid& grid, std::span<const double> u, std::span<const double> v);
double l2_inner(const Grid& grid, const Eigen::VectorXd& u, const Eigen::VectorXd& v);
double l2_norm(const Grid& grid, const Eigen::VectorXd& u);

/// Profile of a single angular harmonic (k, m): f(s) Y_{k,m}. Y is normalized
/// in L^2(S^{n-1}), so inner products reduce to the profile quadrature.
struct ModeFunction {
  int k = 0;
  int m = 0;
  Eigen::VectorXd profile;
};

double l2_inner(const Grid& grid, const ModeFunction& u, const ModeFunction& v);

/// Grid data and every assembled mode as CSV text (node, s, rho, |A|^2, and the
/// diagonal/off-diagonal bands of each mode).
std::string grid_csv(const Grid& grid);
std::string operator_csv(const Grid& grid, const ModeOperator& op);

}  // namespace ancient
