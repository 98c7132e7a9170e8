#include "doctest.h"

#include <boost/math/special_functions/bessel.hpp>

#include "ancient/spectral.hpp"
#include "support.hpp"

using namespace ancient;
using testing_support::catenoid_grid;
using testing_support::plane_grid;

TEST_CASE("grid geometry of the catenoid") {
  const Grid g = catenoid_grid(3.0, 301);
  double area = 0.0;
  for (int j = 0; j < g.Ns; ++j) area += g.weight[j];
  area *= sphere_area(2);
  const double exact = 2.0 * std::numbers::pi * (3.0 + std::sinh(6.0) / 2.0);
  CHECK(area == doctest::Approx(exact).epsilon(1e-3));
  for (int j = 0; j < g.Ns; ++j) {
    CHECK(g.arclength[j] == doctest::Approx(std::sinh(g.s[j])).epsilon(1e-10));
    CHECK(g.rho[j] == doctest::Approx(std::sqrt(1.0 + g.arclength[j] * g.arclength[j])));
  }
  CHECK(g.neck_index() == 150);
  CHECK(g.base_node() == 150);
  CHECK(g.holder_radius == doctest::Approx(1.0));
}

TEST_CASE("build_grid rejects bad sizes") {
  CHECK_THROWS_AS(build_grid(Hypersurface::plane(2), 5.0, 200, 3), ParameterError);
  CHECK_THROWS_AS(build_grid(Hypersurface::catenoid(), 5.0, 3, 3), ParameterError);
  CHECK_THROWS_AS(build_grid(Hypersurface::catenoid(4.0), 5.0, 101, 3), ParameterError);
}

TEST_CASE("mode operators are symmetric in the L2 pairing") {
  std::mt19937_64 rng(11);
  for (const Grid& g : {catenoid_grid(), plane_grid(3)}) {
    for (int k = 0; k <= 2; ++k) {
      const ModeOperator op = assemble_jacobi(g, k);
      for (int trial = 0; trial < 10; ++trial) {
        Eigen::VectorXd u = testing_support::smooth_random(g, rng);
        Eigen::VectorXd v = testing_support::smooth_random(g, rng);
        for (int j = 0; j < op.first; ++j) u[j] = v[j] = 0.0;
        const double a = l2_inner(g, op.apply(g, u), v), b = l2_inner(g, u, op.apply(g, v));
        CHECK(std::abs(a - b) <= 1e-11 * (std::abs(a) + std::abs(b) + 1.0));
      }
    }
  }
}

TEST_CASE("the rotation Jacobi field is annihilated by the mode-1 operator") {
  const Grid g = catenoid_grid(5.0, 161);
  const ModeOperator op = assemble_jacobi(g, 1);
  Eigen::VectorXd J(g.Ns);
  for (int j = 0; j < g.Ns; ++j) J[j] = 1.0 / std::cosh(g.s[j]);  // nu_r
  J[0] = J[g.Ns - 1] = 0.0;
  const Eigen::VectorXd LJ = op.apply(g, J);
  for (int j = 2; j < g.Ns - 2; ++j) CHECK(std::abs(LJ[j]) < 1e-10);
}

TEST_CASE("plane spectra are Bessel zeros") {
  const double S = 6.0;
  SUBCASE("n = 2, modes 0 and 1") {
    const Grid g = plane_grid(2, S, 401, 2);
    for (int k = 0; k <= 1; ++k) {
      const ModeSpectrum ms = solve_mode(g, assemble_jacobi(g, k));
      for (int m = 1; m <= 3; ++m) {
        const double j = boost::math::cyl_bessel_j_zero(static_cast<double>(k), m);
        CHECK(ms.values[m - 1] == doctest::Approx(j * j / (S * S)).epsilon(2e-3));
      }
    }
  }
  SUBCASE("n = 3, radial mode is (m pi / S)^2") {
    const Grid g = plane_grid(3, S, 401, 2);
    const ModeSpectrum ms = solve_mode(g, assemble_jacobi(g, 0));
    for (int m = 1; m <= 3; ++m) {
      const double lam = std::pow(m * std::numbers::pi / S, 2);
      CHECK(ms.values[m - 1] == doctest::Approx(lam).epsilon(2e-3));
    }
  }
}

TEST_CASE("operator dumps have one row per unknown") {
  const Grid g = catenoid_grid(4.0, 41);
  const std::string csv = operator_csv(g, assemble_jacobi(g, 0));
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 39);
  const std::string gc = grid_csv(g);
  CHECK(std::count(gc.begin(), gc.end(), '\n') == 1 + 41);
}
