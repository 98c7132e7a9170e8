#include "ancient/geometry.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include <boost/numeric/odeint.hpp>

namespace ancient {

const char* to_string(SurfaceKind kind) {
  switch (kind) {
    case SurfaceKind::plane: return "plane";
    case SurfaceKind::catenoid: return "catenoid";
    case SurfaceKind::n_catenoid: return "ncatenoid";
  }
  return "?";
}

SurfaceKind surface_kind_from_string(const std::string& name) {
  if (name == "plane") return SurfaceKind::plane;
  if (name == "catenoid") return SurfaceKind::catenoid;
  if (name == "ncatenoid" || name == "n_catenoid") return SurfaceKind::n_catenoid;
  throw ParameterError("unknown surface kind '" + name + "'");
}

Hypersurface Hypersurface::plane(int n, double max_s) {
  if (n < 2) throw ParameterError("plane: n must be >= 2");
  return Hypersurface(SurfaceKind::plane, n, max_s);
}

Hypersurface Hypersurface::catenoid(double max_s) {
  return Hypersurface(SurfaceKind::catenoid, 2, max_s);
}

Hypersurface Hypersurface::n_catenoid(int n, double max_s) {
  if (n < 2) throw ParameterError("n-catenoid: n must be >= 2");
  // r grows like e^s; keep r^{2n-2} representable.
  const double limit = 600.0 / (2.0 * n - 2.0);
  if (max_s > limit) max_s = limit;
  return Hypersurface(SurfaceKind::n_catenoid, n, max_s);
}

Hypersurface Hypersurface::make(SurfaceKind kind, int n, double max_s) {
  switch (kind) {
    case SurfaceKind::plane: return plane(n, max_s);
    case SurfaceKind::catenoid:
      if (n != 2) throw ParameterError("catenoid is the n = 2 surface; use ncatenoid");
      return catenoid(max_s);
    case SurfaceKind::n_catenoid: return n_catenoid(n, max_s);
  }
  throw ParameterError("bad surface kind");
}

double Hypersurface::neck_circumference() const {
  if (kind_ == SurfaceKind::plane) return std::numeric_limits<double>::infinity();
  return 2.0 * std::numbers::pi;  // r(0) = 1
}

ProfileJet Hypersurface::jet(double s) const {
  if (!(std::abs(s) <= max_s_ * (1.0 + 1e-14)))
    throw DomainError("profile coordinate " + std::to_string(s) +
                      " outside [-" + std::to_string(max_s_) + ", " +
                      std::to_string(max_s_) + "]");
  switch (kind_) {
    case SurfaceKind::plane: {
      return {s, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    }
    case SurfaceKind::catenoid: {
      const double c = std::cosh(s), sh = std::sinh(s);
      return {c, sh, c, sh, s, 1.0, 0.0, 0.0};
    }
    case SurfaceKind::n_catenoid: return n_catenoid_jet(s);
  }
  throw DomainError("bad surface");
}

ProfileJet Hypersurface::n_catenoid_jet(double s) const {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 3>;  // r, r', z
  const int n = n_;
  auto rhs = [n](const State& x, State& dx, double) {
    const double r = x[0];
    dx[0] = x[1];
    dx[1] = r + (n - 2) * std::pow(r, 3.0 - 2.0 * n);
    dx[2] = std::pow(r, 2.0 - n);
  };
  State x{1.0, 0.0, 0.0};
  const double a = std::abs(s);
  if (a > 0.0) {
    auto stepper = odeint::make_controlled(1e-14, 1e-13,
                                           odeint::runge_kutta_dopri5<State>());
    odeint::integrate_adaptive(stepper, rhs, x, 0.0, a, std::min(1e-2, a));
  }
  const double r = x[0], r1 = x[1];
  const double r2 = r + (n - 2) * std::pow(r, 3.0 - 2.0 * n);
  const double r3 = r1 + (n - 2) * (3.0 - 2.0 * n) * std::pow(r, 2.0 - 2.0 * n) * r1;
  const double z1 = std::pow(r, 2.0 - n);
  const double z2 = (2.0 - n) * std::pow(r, 1.0 - n) * r1;
  const double z3 = (2.0 - n) * ((1.0 - n) * std::pow(r, -double(n)) * r1 * r1 +
                                 std::pow(r, 1.0 - n) * r2);
  ProfileJet j{r, r1, r2, r3, x[2], z1, z2, z3};
  if (s < 0.0) {
    // r even, z odd
    j.r1 = -j.r1;
    j.r3 = -j.r3;
    j.z = -j.z;
    j.z2 = -j.z2;
  }
  return j;
}

Metric metric_at(const Hypersurface& surface, double s) {
  const ProfileJet j = surface.jet(s);
  const double g = j.r1 * j.r1 + j.z1 * j.z1;
  return {g, j.r * j.r, std::sqrt(g) * std::pow(std::abs(j.r), surface.n() - 1)};
}

Curvature curvature_from_jet(const ProfileJet& j, int n) {
  const double g = j.r1 * j.r1 + j.z1 * j.z1;
  const double speed = std::sqrt(g);
  const double kp = (j.z2 * j.r1 - j.r2 * j.z1) / (g * speed);
  double kr;
  if (j.r != 0.0) {
    kr = j.z1 / (j.r * speed);
  } else {
    kr = j.z2 / (j.r1 * speed);  // axis limit
  }
  return {kp, kr, kp * kp + (n - 1) * kr * kr, kp + (n - 1) * kr};
}

Curvature curvature_at(const Hypersurface& surface, double s) {
  return curvature_from_jet(surface.jet(s), surface.n());
}

double profile_curvature_derivative(const ProfileJet& j) {
  const double g = j.r1 * j.r1 + j.z1 * j.z1;
  const double g1 = 2.0 * (j.r1 * j.r2 + j.z1 * j.z2);
  const double num = j.z2 * j.r1 - j.r2 * j.z1;
  const double num1 = j.z3 * j.r1 - j.r3 * j.z1;
  return num1 / std::pow(g, 1.5) - 1.5 * num * g1 / std::pow(g, 2.5);
}

double CovariantJet::hess_norm(int n) const {
  return std::sqrt(hess_tt * hess_tt + (n - 1) * hess_ee * hess_ee);
}

CovariantJet covariant_jet(const ProfileJet& j, int /*n*/, const GraphJet& u) {
  const double g = j.r1 * j.r1 + j.z1 * j.z1;
  const double g1 = 2.0 * (j.r1 * j.r2 + j.z1 * j.z2);
  CovariantJet c;
  c.grad = u.du / std::sqrt(g);
  c.hess_tt = (u.d2u - 0.5 * g1 / g * u.du) / g;
  if (j.r != 0.0) {
    c.hess_ee = j.r1 * u.du / (j.r * g);
  } else {
    c.hess_ee = u.d2u / g;
  }
  return c;
}

double jacobi_from_jet(const ProfileJet& j, int n, const GraphJet& u) {
  const CovariantJet c = covariant_jet(j, n, u);
  const Curvature k = curvature_from_jet(j, n);
  return c.hess_tt + (n - 1) * c.hess_ee + k.norm_A2 * u.u;
}

GraphCurvature graph_curvature_from_jet(const ProfileJet& j, int n,
                                        const GraphJet& u) {
  const double g = j.r1 * j.r1 + j.z1 * j.z1;
  const double speed = std::sqrt(g);
  const Curvature k = curvature_from_jet(j, n);
  const double dk = profile_curvature_derivative(j);

  // nu = (z', -r')/|X'| and nu' = k_p X'.
  const double nr = j.z1 / speed, nz = -j.r1 / speed;
  const double stretch = 1.0 + u.u * k.k_profile;
  const double tan2 = 2.0 * u.du * k.k_profile + u.u * dk;

  // P = X + u nu
  const double Pr = j.r + u.u * nr;
  const double Pr1 = stretch * j.r1 + u.du * nr;
  const double Pz1 = stretch * j.z1 + u.du * nz;
  const double Pr2 = stretch * j.r2 + tan2 * j.r1 + u.d2u * nr;
  const double Pz2 = stretch * j.z2 + tan2 * j.z1 + u.d2u * nz;

  const double G = Pr1 * Pr1 + Pz1 * Pz1;
  const double Gs = std::sqrt(G);
  const double kp = (Pz2 * Pr1 - Pr2 * Pz1) / (G * Gs);
  double kr;
  if (Pr != 0.0) {
    kr = Pz1 / (Pr * Gs);
  } else {
    kr = Pz2 / (Pr1 * Gs);  // axis limit (plane only)
  }
  GraphCurvature out;
  out.H = -(kp + (n - 1) * kr);
  out.v = Gs / (stretch * speed);
  return out;
}

}  // namespace ancient
