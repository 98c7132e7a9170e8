#include "ancient/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "ancient/kernels.hpp"

namespace ancient {
namespace {

// The first entry above 1e-3 of the peak is made positive.
void fix_sign(Eigen::Ref<Eigen::VectorXd> y) {
  const double peak = y.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (std::abs(y[i]) > 1e-3 * peak) {
      if (y[i] < 0.0) y = -y;
      return;
    }
  }
}

// Zonal factor P_k(cos gamma) with P_k(1) = 1.
double zonal(int n, int k, double gamma) {
  const double x = std::cos(gamma);
  if (n == 2) return std::cos(k * gamma);
  // Gegenbauer C_k^{(l)}, l = (n-2)/2, normalized by its value at 1.
  const double l = 0.5 * (n - 2);
  double c0 = 1.0, c1 = 2.0 * l * x;
  double e0 = 1.0, e1 = 2.0 * l;
  if (k == 0) return 1.0;
  for (int j = 2; j <= k; ++j) {
    const double c2 = (2.0 * x * (j + l - 1.0) * c1 - (j + 2.0 * l - 2.0) * c0) / j;
    const double e2 = (2.0 * (j + l - 1.0) * e1 - (j + 2.0 * l - 2.0) * e0) / j;
    c0 = c1;
    c1 = c2;
    e0 = e1;
    e1 = e2;
  }
  return c1 / e1;
}

Eigen::VectorXd active_profile(const ModeSpectrum& ms, int col, int Ns) {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(Ns);
  for (int i = 0; i < ms.dim(); ++i) f[ms.first + i] = ms.vectors(i, col) / ms.sqrt_mass[i];
  return f;
}

void mirror(const Grid& grid, Eigen::VectorXd& v) {
  if (!grid.surface.has_axis()) return;
  const int mid = grid.neck_index();
  for (int i = 1; i <= mid; ++i) v[mid - i] = v[mid + i];
}

}  // namespace

ModeSpectrum solve_mode(const Grid& grid, const ModeOperator& op, bool vectors) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(op.diag, op.offdiag,
                            vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error("eigensolver failed for mode " + std::to_string(op.k));
  ModeSpectrum ms;
  ms.k = op.k;
  ms.first = op.first;
  ms.multiplicity = harmonic_dimension(grid.n(), op.k);
  ms.values = es.eigenvalues();
  if (vectors) {
    ms.vectors = es.eigenvectors();
    for (int c = 0; c < ms.vectors.cols(); ++c) fix_sign(ms.vectors.col(c));
  }
  ms.sqrt_mass = op.mass.cwiseSqrt();
  return ms;
}

int sturm_negative_count(const Eigen::VectorXd& diag, const Eigen::VectorXd& offdiag,
                         double shift) {
  int count = 0;
  double d = 0.0;
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    d = diag[i] - shift - (i > 0 ? offdiag[i - 1] * offdiag[i - 1] / d : 0.0);
    if (d == 0.0) d = -std::numeric_limits<double>::epsilon() * (std::abs(diag[i]) + 1.0);
    if (d < 0.0) ++count;
  }
  return count;
}

double SpectralData::lambda_min_nonneg() const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& ms : modes)
    for (int i = 0; i < ms.dim(); ++i)
      if (ms.values[i] >= 0.0) best = std::min(best, ms.values[i]);
  return best;
}

Eigen::VectorXd SpectralData::phi(int i) const {
  if (mode_of.at(i) != 0) throw ParameterError("eigenfunction is not axisymmetric");
  Eigen::VectorXd f = phis[i].profile / std::sqrt(sphere_area(grid.n()));
  mirror(grid, f);
  return f;
}

Eigen::VectorXd SpectralData::to_coefficients(const Eigen::VectorXd& f) const {
  const ModeSpectrum& m0 = mode0();
  Eigen::VectorXd w = f.segment(m0.first, m0.dim()).cwiseProduct(m0.sqrt_mass);
  return (m0.vectors.transpose() * w) * std::sqrt(sphere_area(grid.n()));
}

Eigen::VectorXd SpectralData::from_coefficients(const Eigen::VectorXd& c) const {
  const ModeSpectrum& m0 = mode0();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(grid.Ns);
  out.segment(m0.first, m0.dim()) =
      (m0.vectors * c).cwiseQuotient(m0.sqrt_mass) / std::sqrt(sphere_area(grid.n()));
  mirror(grid, out);
  return out;
}

SpectralData negative_spectrum(const Grid& grid, Exec exec, Vectors vectors) {
  const int K = grid.K;
  {
    const ModeOperator top = assemble_jacobi(grid, K);
    if (sturm_negative_count(top.diag, top.offdiag, 1e-14) > 0)
      throw KTooSmallError("mode " + std::to_string(K) + " is not positive definite; raise K", K);
  }
  SpectralData data(grid);
  data.modes = mode_spectra(grid, K, exec, vectors);

  struct Entry {
    double lambda;
    int k, m, col;
  };
  std::vector<Entry> neg;
  for (const auto& ms : data.modes)
    for (int i = 0; i < ms.dim() && ms.values[i] < 0.0; ++i)
      for (int m = 0; m < ms.multiplicity; ++m) neg.push_back({ms.values[i], ms.k, m, i});
  std::stable_sort(neg.begin(), neg.end(), [](const Entry& a, const Entry& b) {
    if (a.lambda != b.lambda) return a.lambda < b.lambda;
    if (a.k != b.k) return a.k < b.k;
    return a.m < b.m;
  });

  for (const auto& e : neg) {
    const ModeSpectrum& ms = data.modes[e.k];
    ModeFunction f{e.k, e.m, active_profile(ms, e.col, grid.Ns)};
    // The profile of a unit eigenvector has sum W f^2 = 1.
    const ModeOperator op = assemble_jacobi(grid, e.k);
    Eigen::VectorXd r = op.apply(grid, f.profile) - e.lambda * f.profile;
    double res = 0.0;
    for (int j = 0; j < grid.Ns; ++j) res += grid.weight[j] * r[j] * r[j];
    data.lambdas.push_back(e.lambda);
    data.mode_of.push_back(e.k);
    data.harmonic_of.push_back(e.m);
    data.phis.push_back(std::move(f));
    data.residuals.push_back(std::sqrt(res) / std::max(1.0, std::abs(e.lambda)));
  }
  return data;
}

int choose_K(const Grid& grid, int safety, int k_max) {
  for (int k = 1; k <= k_max; ++k) {
    const ModeOperator op = assemble_jacobi(grid, k);
    if (sturm_negative_count(op.diag, op.offdiag, 1e-14) == 0) return k + safety;
  }
  throw KTooSmallError("no positive definite mode up to k = " + std::to_string(k_max), k_max);
}

IndexLadder morse_index(const Grid& grid, const std::vector<double>& S_ladder) {
  IndexLadder out;
  for (double S : S_ladder) {
    int Ns = static_cast<int>(std::lround(2.0 * S / grid.h)) + 1;
    if (grid.surface.has_axis() && Ns % 2 == 0) ++Ns;
    Ns = std::max(Ns, 16);
    // Snap S so the mesh width is exactly that of `grid`.
    S = 0.5 * (Ns - 1) * grid.h;
    Grid g = build_grid(grid.surface, S, Ns, 0);
    g.K = grid.K > 0 ? grid.K : choose_K(g);
    const SpectralData data = negative_spectrum(g, Exec::parallel, Vectors::negative_modes);
    out.S.push_back(S);
    out.Ns.push_back(Ns);
    out.index.push_back(data.index());
    out.lambda1.push_back(data.index() > 0 ? data.lambdas.front()
                                           : std::numeric_limits<double>::quiet_NaN());
    if (out.index.size() > 1 && out.index.back() < out.index[out.index.size() - 2])
      out.monotone = false;
  }
  return out;
}

Eigen::VectorXd project_below(const SpectralData& data, const Eigen::VectorXd& f, double mu) {
  const ModeSpectrum& m0 = data.mode0();
  Eigen::VectorXd c = data.to_coefficients(f);
  for (int i = 0; i < m0.dim(); ++i)
    if (!(m0.values[i] < mu)) c[i] = 0.0;
  return data.from_coefficients(c);
}

Eigen::VectorXd iota_coefficients(const SpectralData& data, const Eigen::VectorXd& a) {
  if (a.size() != data.index())
    throw ParameterError("a has " + std::to_string(a.size()) + " components, index is " +
                         std::to_string(data.index()));
  Eigen::VectorXd c = Eigen::VectorXd::Zero(data.mode0().dim());
  int col = 0;
  for (int j = 0; j < data.index(); ++j) {
    if (data.mode_of[j] != 0) {
      if (a[j] != 0.0)
        throw ParameterError("non-axisymmetric directions of a are not supported");
      continue;
    }
    c[col++] = a[j];
  }
  return c;
}

Eigen::VectorXd iota_minus(const SpectralData& data, const Eigen::VectorXd& a, double t) {
  if (t > 0.0) throw DomainError("iota_minus needs t <= 0");
  Eigen::VectorXd c = iota_coefficients(data, a);
  const ModeSpectrum& m0 = data.mode0();
  for (int i = 0; i < m0.dim(); ++i)
    if (c[i] != 0.0) c[i] *= std::exp(-m0.values[i] * t);
  return data.from_coefficients(c);
}

const Eigen::VectorXd& Semigroup::decay(int k, double t) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto key = std::make_pair(k, t);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  const Eigen::VectorXd& mu = data_.modes[k].values;
  Eigen::VectorXd e(mu.size());
  for (Eigen::Index i = 0; i < mu.size(); ++i) e[i] = std::exp(-mu[i] * t);
  return cache_.emplace(key, std::move(e)).first->second;
}

Eigen::VectorXd Semigroup::apply(const Eigen::VectorXd& f, double t) const {
  if (t < 0.0) throw DomainError("semigroup needs t >= 0");
  Eigen::VectorXd c = data_.to_coefficients(f);
  return data_.from_coefficients(c.cwiseProduct(decay(0, t)));
}

double Semigroup::kernel_sum(int x, int y, double t, double gamma, bool skip_negative) const {
  if (!(t > 0.0)) throw DomainError("heat kernel needs t > 0");
  const Grid& g = data_.grid;
  const int n = g.n();
  if (g.surface.has_axis()) {
    // Points on the mirrored half sit at the antipodal angle.
    const int mid = g.neck_index();
    if (x < mid) {
      x = 2 * mid - x;
      gamma += std::numbers::pi;
    }
    if (y < mid) {
      y = 2 * mid - y;
      gamma += std::numbers::pi;
    }
  }
  const double area = sphere_area(n);
  double total = 0.0;
  for (const auto& ms : data_.modes) {
    const int ix = x - ms.first, iy = y - ms.first;
    if (ix < 0 || iy < 0 || ix >= ms.dim() || iy >= ms.dim()) continue;
    const Eigen::VectorXd& e = decay(ms.k, t);
    double acc = 0.0;
    for (int i = 0; i < ms.dim(); ++i) {
      if (skip_negative && ms.values[i] < 0.0) continue;
      acc += e[i] * (ms.vectors(ix, i) * ms.vectors(iy, i));
    }
    acc /= ms.sqrt_mass[ix] * ms.sqrt_mass[iy];
    total += ms.multiplicity / area * zonal(n, ms.k, gamma) * acc;
  }
  return total;
}

double Semigroup::kernel(int x, int y, double t, double gamma) const {
  return kernel_sum(x, y, t, gamma, false);
}

double Semigroup::kernel_nonneg(int x, int y, double t, double gamma) const {
  return kernel_sum(x, y, t, gamma, true);
}

KernelBoundReport verify_kernel_bound(const Semigroup& sg, double delta, int count,
                                      std::uint64_t seed) {
  const Grid& g = sg.data().grid;
  KernelBoundReport rep;
  rep.delta = delta;

  const int lo = g.first_active(0) + 1, hi = g.last_active() - 1;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> node(lo, hi);
  std::uniform_real_distribution<double> time(1.0, 8.0);
  const int p = g.base_node();
  for (int i = 0; i < count; ++i) {
    KernelSample s{};
    s.x = node(rng);
    s.y = node(rng);
    s.t = time(rng);
    s.d_xy = g.distance(s.x, s.y);
    s.d_x = g.distance(s.x, p);
    s.d_y = g.distance(s.y, p);
    rep.samples.push_back(s);
  }
  const std::vector<double> vals = kernel_samples(sg, rep.samples, Exec::parallel);
  for (std::size_t i = 0; i < vals.size(); ++i) rep.samples[i].g_nonneg = vals[i];

  rep.C = std::numeric_limits<double>::infinity();
  for (double c : {0.25, 0.125, 0.0625, 0.03125, 0.015625}) {
    double C = 0.0;
    for (const auto& s : rep.samples) {
      const double env = std::exp(delta * s.t) *
                         (std::exp(-c * s.d_xy * s.d_xy / s.t) + std::exp(-c * (s.d_x + s.d_y)));
      C = std::max(C, s.g_nonneg / env);
    }
    rep.ladder.emplace_back(c, C);
    if (C < rep.C) {
      rep.C = C;
      rep.c = c;
    }
  }
  rep.pass = std::isfinite(rep.C) && rep.c > 0.0;

  rep.diagonal_neck = sg.kernel_nonneg(p, p, 1.0);
  for (double t : {1.0, 2.0, 4.0, 8.0}) {
    rep.growth_t.push_back(t);
    rep.growth.push_back(std::exp(-delta * t) * std::abs(sg.kernel_nonneg(p, p, t)));
  }

  // Least-squares slope of -log G^{>=0}(p, y, 1) against d^2 for d in (0, 3].
  std::vector<double> xs, ys;
  for (int y = p + 1; y <= hi; ++y) {
    const double d = g.distance(p, y);
    if (d > 3.0) break;
    const double v = sg.kernel_nonneg(p, y, 1.0);
    if (v > 0.0) {
      xs.push_back(d * d);
      ys.push_back(-std::log(v));
    }
  }
  if (xs.size() >= 2) {
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    rep.gaussian_slope = sxy / sxx;
  }
  rep.subchecks = std::isfinite(rep.diagonal_neck) && rep.growth.back() < rep.growth.front() &&
                  rep.gaussian_slope > 0.0;
  return rep;
}

std::string eigenfunction_csv(const SpectralData& data, int i) {
  std::ostringstream os;
  os.precision(17);
  os << "s,phi\n";
  const ModeFunction& f = data.phis.at(i);
  for (int j = 0; j < data.grid.Ns; ++j) os << data.grid.s[j] << ',' << f.profile[j] << '\n';
  return os.str();
}

}  // namespace ancient
