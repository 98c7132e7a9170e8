#include "doctest.h"

#include <cmath>

#include "ancient/geometry.hpp"

using namespace ancient;

TEST_CASE("catenoid curvatures match the closed forms") {
  const Hypersurface cat = Hypersurface::catenoid();
  for (double s : {-3.0, -1.2, 0.0, 0.4, 2.5}) {
    const ProfileJet j = cat.jet(s);
    CHECK(j.r == doctest::Approx(std::cosh(s)).epsilon(1e-14));
    CHECK(j.z == doctest::Approx(s));
    const Metric m = metric_at(cat, s);
    CHECK(m.g_ss == doctest::Approx(std::cosh(s) * std::cosh(s)).epsilon(1e-13));
    const Curvature c = curvature_at(cat, s);
    CHECK(c.H == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(c.norm_A2 == doctest::Approx(2.0 / std::pow(std::cosh(s), 4)).epsilon(1e-12));
    CHECK(std::abs(c.k_rotation) == doctest::Approx(1.0 / (std::cosh(s) * std::cosh(s))));
  }
}

TEST_CASE("n-catenoid is minimal with |A|^2 = n(n-1) r^{-2n}") {
  for (int n : {3, 4}) {
    const Hypersurface cat = Hypersurface::n_catenoid(n, 6.0);
    for (double s : {-2.0, 0.0, 0.3, 1.7, 5.0}) {
      const ProfileJet j = cat.jet(s);
      const double speed = std::hypot(j.r1, j.z1);
      CHECK(speed == doctest::Approx(j.r).epsilon(1e-8));
      const Curvature c = curvature_from_jet(j, n);
      CHECK(std::abs(c.H) < 1e-7 * std::max(1.0, std::sqrt(c.norm_A2)));
      CHECK(c.norm_A2 == doctest::Approx(n * (n - 1) * std::pow(j.r, -2 * n)).epsilon(1e-7));
    }
  }
}

TEST_CASE("plane has a signed radius and no curvature") {
  const Hypersurface p = Hypersurface::plane(3);
  const ProfileJet j = p.jet(-2.0);
  CHECK(j.r == -2.0);
  CHECK(j.z == 0.0);
  const Curvature c = curvature_at(p, 1.5);
  CHECK(c.norm_A2 == 0.0);
  CHECK(c.H == 0.0);
}

TEST_CASE("jets outside the truncation are domain errors") {
  const Hypersurface cat = Hypersurface::catenoid(4.0);
  CHECK_THROWS_AS(cat.jet(4.5), DomainError);
  CHECK_THROWS_AS(Hypersurface::make(SurfaceKind::catenoid, 3, 4.0), ParameterError);
  CHECK_THROWS_AS(surface_kind_from_string("torus"), ParameterError);
}

TEST_CASE("graph over the plane: a spherical cap moves at n / radius") {
  // u = R - sqrt(R^2 - r^2) along nu = -e_z is the lower cap of a sphere of
  // radius R; the vertical speed of MCF there is (n / R) v with v = R / sqrt(R^2 - r^2).
  const double R = 5.0;
  for (int n : {2, 3}) {
    const Hypersurface p = Hypersurface::plane(n);
    for (double s : {-2.0, 0.5, 3.0}) {
      const double q = std::sqrt(R * R - s * s);
      const GraphJet u{R - q, s / q, R * R / (q * q * q)};
      const GraphCurvature g = graph_curvature_from_jet(p.jet(s), n, u);
      CHECK(g.v == doctest::Approx(R / q).epsilon(1e-12));
      CHECK(std::abs(g.speed()) == doctest::Approx(n / q).epsilon(1e-12));
    }
  }
}

TEST_CASE("Jacobi operator of the translation field vanishes") {
  // <e_z, nu> = z'/|X'| is a Jacobi field of any surface of revolution.
  const Hypersurface cat = Hypersurface::catenoid();
  for (double s : {-1.0, 0.2, 2.0}) {
    const double c = std::cosh(s), t = std::tanh(s);
    // nu_z = -r'/|X'| = -tanh s
    const GraphJet u{-t, -1.0 / (c * c), 2.0 * t / (c * c)};
    CHECK(jacobi_from_jet(cat.jet(s), 2, u) == doctest::Approx(0.0).epsilon(1e-12));
  }
}
