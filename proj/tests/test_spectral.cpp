#include "doctest.h"

#include <Eigen/Eigenvalues>

#include "ancient/spectral.hpp"
#include "support.hpp"

using namespace ancient;
using testing_support::catenoid_grid;
using testing_support::plane_grid;

namespace {

// First eigenvalue of -u'' - 2 sech^2(s) u = lambda cosh^2(s) u on (-S, S)
// with Dirichlet ends (the conformal form on the catenoid), from an
// independent generalized eigensolve on fine grids and Richardson
// extrapolation. S-independent to 1e-9 for S >= 6.
constexpr double kCatenoidLambda1 = -0.56363554;

}  // namespace

TEST_CASE("Sturm inertia count agrees with a dense eigensolve") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_int_distribution<int> size(1, 40);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = size(rng);
    Eigen::VectorXd d(n), e(std::max(0, n - 1));
    for (int i = 0; i < n; ++i) d[i] = u(rng);
    for (int i = 0; i + 1 < n; ++i) e[i] = u(rng);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    A.diagonal() = d;
    if (n > 1) {
      A.diagonal(1) = e;
      A.diagonal(-1) = e;
    }
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(A).eigenvalues();
    const double shift = u(rng);
    int neg = 0;
    for (int i = 0; i < n; ++i) neg += ev[i] < shift;
    // Skip draws with an eigenvalue too close to the shift to call.
    if (((ev.array() - shift).abs() < 1e-9).any()) continue;
    CHECK(sturm_negative_count(d, e, shift) == neg);
  }
}

TEST_CASE("catenoid has index one, in the radial mode") {
  const SpectralData d = negative_spectrum(catenoid_grid());
  REQUIRE(d.index() == 1);
  CHECK(d.mode_of[0] == 0);
  CHECK(d.lambdas[0] == doctest::Approx(kCatenoidLambda1).epsilon(2e-4));
  CHECK(d.residuals[0] < 1e-10);
}

TEST_CASE("first eigenvalue converges to the oracle at second order") {
  std::vector<double> lam;
  for (int Ns : {201, 401, 801}) lam.push_back(negative_spectrum(catenoid_grid(6.0, Ns)).lambdas[0]);
  const double e1 = lam[0] - lam[1], e2 = lam[1] - lam[2];
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
  const double extrapolated = (4.0 * lam[2] - lam[1]) / 3.0;
  CHECK(extrapolated == doctest::Approx(kCatenoidLambda1).epsilon(2e-6));
}

TEST_CASE("index of the plane and the 3-catenoid") {
  CHECK(negative_spectrum(plane_grid(2)).index() == 0);
  CHECK(negative_spectrum(plane_grid(3)).index() == 0);
  const Grid g = build_grid(Hypersurface::n_catenoid(3, 6.0), 6.0, 201, 3);
  const SpectralData d = negative_spectrum(g);
  CHECK(d.index() == 1);
  CHECK(d.mode_of[0] == 0);
  // Regression value at this resolution.
  CHECK(d.lambdas[0] == doctest::Approx(-1.3057).epsilon(1e-3));
}

TEST_CASE("K must leave a positive definite top mode") {
  const Grid g = catenoid_grid(6.0, 201, 0);
  CHECK_THROWS_AS(negative_spectrum(g), KTooSmallError);
  try {
    negative_spectrum(g);
  } catch (const KTooSmallError& e) {
    CHECK(e.offending_mode() == 0);
  }
  CHECK(choose_K(g) == 3);
}

TEST_CASE("coefficient transforms are inverse and isometric") {
  const SpectralData d = negative_spectrum(catenoid_grid());
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::VectorXd f = testing_support::smooth_random(d.grid, rng);
    const Eigen::VectorXd c = d.to_coefficients(f);
    CHECK((d.from_coefficients(c) - f).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(c.norm() == doctest::Approx(l2_norm(d.grid, f)).epsilon(1e-12));
  }
}

TEST_CASE("iota_minus is the backward exponential of the negative modes") {
  const SpectralData d = negative_spectrum(catenoid_grid());
  Eigen::VectorXd a(1);
  a << 0.3;
  const Eigen::VectorXd i0 = iota_minus(d, a, 0.0), i1 = iota_minus(d, a, -2.0);
  CHECK((i0 - 0.3 * d.phi(0)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((i1 - std::exp(2.0 * d.lambdas[0]) * i0).cwiseAbs().maxCoeff() < 1e-14);
  CHECK_THROWS_AS(iota_coefficients(d, Eigen::VectorXd::Zero(2)), ParameterError);
}

TEST_CASE("heat kernel integrates to the semigroup and is symmetric") {
  const SpectralData d = negative_spectrum(catenoid_grid(5.0, 101));
  const Semigroup sg(d);
  const Grid& g = d.grid;
  std::mt19937_64 rng(9);
  const Eigen::VectorXd f = testing_support::smooth_random(g, rng);
  const double t = 0.7;
  const Eigen::VectorXd Pf = sg.apply(f, t);
  // Integrate over the circle with a uniform rule, exact for the retained harmonics.
  const int Ng = 16;
  for (int x : {10, 50, 77}) {
    double acc = 0.0;
    for (int y = 0; y < g.Ns; ++y)
      for (int q = 0; q < Ng; ++q)
        acc += sg.kernel(x, y, t, 2.0 * std::numbers::pi * q / Ng) * f[y] * g.weight[y];
    CHECK(acc * 2.0 * std::numbers::pi / Ng == doctest::Approx(Pf[x]).epsilon(1e-10));
    for (int y : {3, 40, 90}) CHECK(sg.kernel(x, y, t) == sg.kernel(y, x, t));
  }
  CHECK_THROWS_AS(sg.kernel(10, 20, 0.0), DomainError);
}

TEST_CASE("semigroup law on random fields") {
  const SpectralData d = negative_spectrum(catenoid_grid());
  const Semigroup sg(d);
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> t(0.1, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::VectorXd f = testing_support::smooth_random(d.grid, rng);
    const double s1 = t(rng), s2 = t(rng);
    const Eigen::VectorXd a = sg.apply(sg.apply(f, s1), s2), b = sg.apply(f, s1 + s2);
    CHECK(l2_norm(d.grid, a - b) <= 1e-8 * l2_norm(d.grid, b));
  }
}

TEST_CASE("projector below mu is an orthogonal projection") {
  const SpectralData d = negative_spectrum(catenoid_grid());
  std::mt19937_64 rng(2);
  const double mu = d.mode0().values[4];
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::VectorXd f = testing_support::smooth_random(d.grid, rng);
    const Eigen::VectorXd k = testing_support::smooth_random(d.grid, rng);
    const Eigen::VectorXd Pf = project_below(d, f, mu), Pk = project_below(d, k, mu);
    CHECK(l2_norm(d.grid, project_below(d, Pf, mu) - Pf) < 1e-12 * l2_norm(d.grid, f));
    CHECK(std::abs(l2_inner(d.grid, Pf, k) - l2_inner(d.grid, f, Pk)) < 1e-12);
    CHECK(std::abs(l2_inner(d.grid, f - Pf, Pf)) < 1e-12);
  }
}

TEST_CASE("kernel bound finds positive Gaussian constants") {
  const SpectralData d = negative_spectrum(catenoid_grid());
  const Semigroup sg(d);
  const KernelBoundReport r = verify_kernel_bound(sg, 0.28, 200, 1);
  CHECK(r.pass);
  CHECK(r.subchecks);
  CHECK(r.c > 0.0);
  CHECK(std::isfinite(r.C));
  CHECK(r.samples.size() == 200);
}

TEST_CASE("index-only spectra skip the vectors of stable modes") {
  const Grid g = catenoid_grid();
  const SpectralData full = negative_spectrum(g);
  const SpectralData lean = negative_spectrum(g, Exec::serial, Vectors::negative_modes);
  CHECK(lean.index() == full.index());
  CHECK(lean.lambdas == full.lambdas);
  CHECK(lean.mode0().vectors.cols() == lean.mode0().dim());
  for (std::size_t k = 1; k < lean.modes.size(); ++k) {
    CHECK(lean.modes[k].vectors.size() == 0);
    CHECK(lean.modes[k].values == full.modes[k].values);
  }
}

TEST_CASE("index ladder holds the mesh width fixed") {
  const Grid g = catenoid_grid(8.0, 400, 8);
  const IndexLadder ladder = morse_index(g, {3.0, 5.0, 8.0});
  REQUIRE(ladder.S.size() == 3);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(2.0 * ladder.S[i] / (ladder.Ns[i] - 1) == doctest::Approx(g.h).epsilon(1e-14));
  CHECK(ladder.monotone);
  CHECK(ladder.final_index() == 1);
  CHECK(ladder.lambda1[2] == doctest::Approx(negative_spectrum(g).lambdas[0]).epsilon(1e-12));
}
