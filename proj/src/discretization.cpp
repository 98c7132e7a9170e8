#include "ancient/discretization.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "ancient/common.hpp"

namespace ancient {
namespace {

// 5-point Gauss-Legendre on [a, b].
template <class F>
double gauss5(F&& f, double a, double b) {
  static constexpr std::array<double, 5> x{0.0, -0.5384693101056831, 0.5384693101056831,
                                           -0.9061798459386640, 0.9061798459386640};
  static constexpr std::array<double, 5> w{0.5688888888888889, 0.4786286704993665,
                                           0.4786286704993665, 0.2369268850561891,
                                           0.2369268850561891};
  const double c = 0.5 * (a + b), r = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < 5; ++i) acc += w[i] * f(c + r * x[i]);
  return acc * r;
}

double profile_speed(const Hypersurface& surface, double s) {
  const ProfileJet j = surface.jet(s);
  return std::sqrt(j.r1 * j.r1 + j.z1 * j.z1);
}

// p = area / g_ss, the flux coefficient of the profile Laplacian.
double flux_coefficient(const Hypersurface& surface, double s) {
  const Metric m = metric_at(surface, s);
  return m.area_element / m.g_ss;
}

void mirror_plane(const Grid& grid, Eigen::VectorXd& v, int k) {
  if (!grid.surface.has_axis()) return;
  const int mid = grid.neck_index();
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  for (int i = 1; i <= mid; ++i) v[mid - i] = sign * v[mid + i];
}

}  // namespace

int Grid::first_active(int k) const {
  if (surface.has_axis()) return neck_index() + (k == 0 ? 0 : 1);
  return 1;
}

int Grid::neck_index() const {
  if (Ns % 2 == 1) return (Ns - 1) / 2;
  return -1;
}

int Grid::base_node() const {
  int best = 0;
  for (int j = 1; j < Ns; ++j)
    if (std::abs(arclength[j]) < std::abs(arclength[best])) best = j;
  return best;
}

double Grid::distance(int i, int j) const {
  return std::abs(arclength[i] - arclength[j]);
}

Grid build_grid(const Hypersurface& surface, double S, int Ns, int K) {
  if (!(S > 0.0)) throw ParameterError("grid: S must be positive");
  if (Ns < 16) throw ParameterError("grid: N_s must be >= 16");
  if (K < 0) throw ParameterError("grid: K must be >= 0");
  if (S > surface.max_s()) throw ParameterError("grid: S exceeds the surface domain");
  if (surface.has_axis() && Ns % 2 == 0)
    throw ParameterError("grid: the plane needs an odd N_s (axis node)");

  Grid g(surface);
  g.S = S;
  g.Ns = Ns;
  g.K = K;
  g.h = 2.0 * S / (Ns - 1);
  const int n = surface.n();

  g.s.resize(Ns);
  for (int j = 0; j < Ns; ++j) g.s[j] = S * (2.0 * j - (Ns - 1)) / (Ns - 1);

  g.jets.resize(Ns);
  g.area.resize(Ns);
  g.A2.resize(Ns);
  g.weight.assign(Ns, 0.0);
  g.r_euclid.resize(Ns);
  for (int j = 0; j < Ns; ++j) {
    g.jets[j] = surface.jet(g.s[j]);
    g.area[j] = metric_at(surface, g.s[j]).area_element;
    g.A2[j] = curvature_from_jet(g.jets[j], n).norm_A2;
    g.r_euclid[j] = 1.0 + std::hypot(g.jets[j].r, g.jets[j].z);
  }

  if (surface.has_axis()) {
    // Ray r = |s|: finite-volume cells on s >= 0, mirror half carries no mass.
    const int mid = g.neck_index();
    const double half = 0.5 * g.h;
    auto cell = [n](double a, double b) { return (std::pow(b, n) - std::pow(a, n)) / n; };
    g.weight[mid] = cell(0.0, half);
    for (int j = mid + 1; j < Ns - 1; ++j) g.weight[j] = cell(g.s[j] - half, g.s[j] + half);
    g.weight[Ns - 1] = cell(S - half, S);
  } else {
    for (int j = 0; j < Ns; ++j) g.weight[j] = g.h * g.area[j];
    g.weight[0] *= 0.5;
    g.weight[Ns - 1] *= 0.5;
  }

  // Signed arc length from the neck, cell by cell outward.
  g.arclength.assign(Ns, 0.0);
  if (surface.has_axis()) {
    for (int j = 0; j < Ns; ++j) g.arclength[j] = g.s[j];
  } else {
    auto speed = [&surface](double x) { return profile_speed(surface, x); };
    int right = Ns / 2;  // first node with s >= 0
    while (right > 0 && g.s[right - 1] >= 0.0) --right;
    while (g.s[right] < 0.0) ++right;
    g.arclength[right] = gauss5(speed, 0.0, g.s[right]);
    for (int j = right + 1; j < Ns; ++j)
      g.arclength[j] = g.arclength[j - 1] + gauss5(speed, g.s[j - 1], g.s[j]);
    if (right > 0) {
      g.arclength[right - 1] = -gauss5(speed, g.s[right - 1], 0.0);
      for (int j = right - 2; j >= 0; --j)
        g.arclength[j] = g.arclength[j + 1] - gauss5(speed, g.s[j], g.s[j + 1]);
    }
  }
  g.rho.resize(Ns);
  for (int j = 0; j < Ns; ++j) g.rho[j] = std::sqrt(1.0 + g.arclength[j] * g.arclength[j]);

  g.holder_radius = std::min(1.0, surface.neck_circumference() / 4.0);
  return g;
}

ModeOperator assemble_jacobi(const Grid& grid, int k) {
  if (k < 0) throw ParameterError("assemble_jacobi: negative mode");
  const int n = grid.n();
  const int first = grid.first_active(k);
  const int last = grid.last_active();
  const int dim = last - first + 1;
  const double h = grid.h;
  const Hypersurface& surf = grid.surface;

  // p at the midpoint between node j and j+1, for j = first-1 .. last.
  std::vector<double> p_half(dim + 1);
  for (int i = 0; i <= dim; ++i) {
    const int j = first - 1 + i;
    p_half[i] = flux_coefficient(surf, 0.5 * (grid.s[j] + grid.s[j + 1]));
  }
  // The axis cell of the plane has no flux across s = 0.
  const bool axis_cell = surf.has_axis() && k == 0;
  if (axis_cell) p_half[0] = 0.0;

  ModeOperator op;
  op.k = k;
  op.first = first;
  op.stiff_diag.resize(dim);
  op.stiff_off.resize(std::max(dim - 1, 0));
  op.mass.resize(dim);
  op.potential.resize(dim);
  for (int i = 0; i < dim; ++i) {
    op.stiff_diag[i] = (p_half[i] + p_half[i + 1]) / h;
    if (i + 1 < dim) op.stiff_off[i] = -p_half[i + 1] / h;
    op.mass[i] = grid.weight[first + i];
  }

  const double lk = angular_eigenvalue(n, k);
  const double l1 = angular_eigenvalue(n, 1);
  const bool calibrated = !surf.has_axis();
  for (int i = 0; i < dim; ++i) {
    const int j = first + i;
    const ProfileJet& jt = grid.jets[j];
    if (calibrated) {
      // J = nu_r solves the mode-1 Jacobi equation; read the potential off it.
      auto J = [&grid](int idx) {
        const ProfileJet& q = grid.jets[idx];
        return q.z1 / std::sqrt(q.r1 * q.r1 + q.z1 * q.z1);
      };
      const double KJ = (p_half[i] * (J(j) - J(j - 1)) - p_half[i + 1] * (J(j + 1) - J(j))) / h;
      const double q1 = -KJ / (op.mass[i] * J(j));
      op.potential[i] = q1 + (lk - l1) / (jt.r * jt.r);
    } else {
      const double ang = (jt.r > 0.0) ? lk / (jt.r * jt.r) : 0.0;
      op.potential[i] = ang - grid.A2[j];
    }
  }

  op.diag.resize(dim);
  op.offdiag.resize(std::max(dim - 1, 0));
  for (int i = 0; i < dim; ++i) {
    op.diag[i] = op.stiff_diag[i] / op.mass[i] + op.potential[i];
    if (i + 1 < dim) op.offdiag[i] = op.stiff_off[i] / std::sqrt(op.mass[i] * op.mass[i + 1]);
  }
  return op;
}

Eigen::MatrixXd ModeOperator::dense_symmetric() const {
  const int d = dim();
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    B(i, i) = diag[i];
    if (i + 1 < d) B(i, i + 1) = B(i + 1, i) = offdiag[i];
  }
  return B;
}

Eigen::VectorXd ModeOperator::apply(const Grid& grid, const Eigen::VectorXd& u) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(grid.Ns);
  const int d = dim();
  for (int i = 0; i < d; ++i) {
    const int j = first + i;
    double ku = stiff_diag[i] * u[j];
    if (i > 0) ku += stiff_off[i - 1] * u[j - 1];
    if (i + 1 < d) ku += stiff_off[i] * u[j + 1];
    out[j] = ku / mass[i] + potential[i] * u[j];
  }
  mirror_plane(grid, out, k);
  return out;
}

Eigen::VectorXd apply_jacobi(const Grid& grid, const ModeOperator& mode0,
                             const Eigen::VectorXd& u) {
  return -mode0.apply(grid, u);
}

double l2_inner(const Grid& grid, std::span<const double> u, std::span<const double> v) {
  double acc = 0.0;
  for (int j = 0; j < grid.Ns; ++j) acc += grid.weight[j] * u[j] * v[j];
  return sphere_area(grid.n()) * acc;
}

double l2_inner(const Grid& grid, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  return l2_inner(grid, std::span<const double>(u.data(), u.size()),
                  std::span<const double>(v.data(), v.size()));
}

double l2_norm(const Grid& grid, const Eigen::VectorXd& u) {
  return std::sqrt(l2_inner(grid, u, u));
}

double l2_inner(const Grid& grid, const ModeFunction& u, const ModeFunction& v) {
  if (u.k != v.k || u.m != v.m) return 0.0;
  double acc = 0.0;
  for (int j = 0; j < grid.Ns; ++j) acc += grid.weight[j] * u.profile[j] * v.profile[j];
  return acc;
}

std::string grid_csv(const Grid& grid) {
  std::ostringstream os;
  os.precision(17);
  os << "node,s,rho,area,weight,A2\n";
  for (int j = 0; j < grid.Ns; ++j)
    os << j << ',' << grid.s[j] << ',' << grid.rho[j] << ',' << grid.area[j] << ','
       << grid.weight[j] << ',' << grid.A2[j] << '\n';
  return os.str();
}

std::string operator_csv(const Grid& grid, const ModeOperator& op) {
  std::ostringstream os;
  os.precision(17);
  os << "k,node,s,diag,offdiag,mass,potential\n";
  for (int i = 0; i < op.dim(); ++i) {
    const int j = op.first + i;
    os << op.k << ',' << j << ',' << grid.s[j] << ',' << op.diag[i] << ','
       << (i + 1 < op.dim() ? op.offdiag[i] : 0.0) << ',' << op.mass[i] << ','
       << op.potential[i] << '\n';
  }
  return os.str();
}

}  // namespace ancient
