#pragma once

#include <span>
#include <vector>

#include "ancient/common.hpp"

namespace ancient {

enum class SurfaceKind { plane, catenoid, n_catenoid };

const char* to_string(SurfaceKind kind);
SurfaceKind surface_kind_from_string(const std::string& name);

/// Profile curve (r(s), z(s)) in the (radial, axial) half-plane together with
/// its first three s-derivatives. The hypersurface is the rotation of this
/// curve about the axial direction by SO(n).
struct ProfileJet {
  double r, r1, r2, r3;
  double z, z1, z2, z3;
};

/// Minimal hypersurface of revolution in R^{n+1}.
///
/// Parametrizations (all with r(0) = 1 at the neck except the plane):
///  - plane:      the line r = s, z = 0 through the axis; s < 0 is the ray
///                at the antipodal angle, so r is a signed radius there.
///  - catenoid:   r = cosh s, z = s (n = 2, conformal coordinates).
///  - n_catenoid: |X'| = r, i.e. r'' = r + (n-2) r^{3-2n}, z' = r^{2-n},
///                integrated numerically from r(0)=1, r'(0)=0.
/// The unit normal is nu = (z', -r')/|X'|; on catenoids it points away from
/// the axis at the neck. Curvatures are taken with H = div(nu).
class Hypersurface {
 public:
  static Hypersurface plane(int n, double max_s = 64.0);
  static Hypersurface catenoid(double max_s = 32.0);
  static Hypersurface n_catenoid(int n, double max_s = 16.0);
  static Hypersurface make(SurfaceKind kind, int n, double max_s);

  SurfaceKind kind() const { return kind_; }
  int n() const { return n_; }
  double max_s() const { return max_s_; }
  bool has_axis() const { return kind_ == SurfaceKind::plane; }

  /// Profile jet at s; throws DomainError when |s| > max_s().
  ProfileJet jet(double s) const;

  /// Circumference of the neck circle (plane: +inf).
  double neck_circumference() const;

 private:
  Hypersurface(SurfaceKind kind, int n, double max_s)
      : kind_(kind), n_(n), max_s_(max_s) {}
  ProfileJet n_catenoid_jet(double s) const;

  SurfaceKind kind_;
  int n_;
  double max_s_;
};

struct Metric {
  double g_ss;          // |X'|^2
  double g_angular;     // r^2 (times the round metric of S^{n-1})
  double area_element;  // sqrt(g_ss) r^{n-1}
};

Metric metric_at(const Hypersurface& surface, double s);

struct Curvature {
  double k_profile;   // principal curvature along the profile
  double k_rotation;  // principal curvature of each of the n-1 rotation directions
  double norm_A2;     // |A|^2
  double H;           // div(nu)
};

Curvature curvature_at(const Hypersurface& surface, double s);
Curvature curvature_from_jet(const ProfileJet& jet, int n);

/// Derivative of the profile curvature with respect to s.
double profile_curvature_derivative(const ProfileJet& jet);

/// Profile derivatives of an axisymmetric normal displacement.
struct GraphJet {
  double u, du, d2u;
};

/// Covariant derivatives of an axisymmetric field in the orthonormal frame
/// (profile tangent T, rotation directions E).
struct CovariantJet {
  double grad;  // <grad u, T>
  double hess_tt;
  double hess_ee;  // same value for each of the n-1 rotation directions
  double hess_norm(int n) const;
};

CovariantJet covariant_jet(const ProfileJet& jet, int n, const GraphJet& u);

/// Pointwise graph quantities. speed is v*H_Gamma, where H_Gamma = <H, nu_Gamma>
/// is the component of the mean curvature vector of the graph along its normal,
/// so that graphical mean curvature flow reads du/dt = v H_Gamma.
struct GraphCurvature {
  double H;  // H_Gamma
  double v;  // 1 / <nu_Gamma, nu_Sigma>
  double speed() const { return v * H; }
};

GraphCurvature graph_curvature_from_jet(const ProfileJet& jet, int n,
                                        const GraphJet& u);

/// Jacobi operator (Delta + |A|^2) u evaluated from the same jet.
double jacobi_from_jet(const ProfileJet& jet, int n, const GraphJet& u);

}  // namespace ancient
