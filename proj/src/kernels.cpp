#include "ancient/kernels.hpp"

#include <cmath>
#include <exception>

#include "ancient/graph.hpp"

namespace ancient {
namespace {

// Runs body(i) for i in [0, count); exceptions are rethrown in index order
// after the loop.
template <class Body>
void for_each_index(int count, Exec exec, Body&& body) {
  std::vector<std::exception_ptr> errors(count);
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (int i = 0; i < count; ++i) {
    try {
      body(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

std::vector<ModeSpectrum> mode_spectra(const Grid& grid, int K, Exec exec, Vectors vectors) {
  std::vector<ModeSpectrum> out(K + 1);
  for_each_index(K + 1, exec, [&](int k) {
    const ModeOperator op = assemble_jacobi(grid, k);
    const bool want = vectors == Vectors::all || sturm_negative_count(op.diag, op.offdiag) > 0;
    out[k] = solve_mode(grid, op, want);
  });
  return out;
}

Eigen::MatrixXd nonlinear_error_slices(const Grid& grid, const Eigen::MatrixXd& U, Exec exec) {
  Eigen::MatrixXd E(U.rows(), U.cols());
  for_each_index(static_cast<int>(U.cols()), exec, [&](int m) {
    E.col(m) = nonlinear_error(grid, Eigen::VectorXd(U.col(m)));
  });
  return E;
}

Eigen::MatrixXd graph_speed_slices(const Grid& grid, const Eigen::MatrixXd& U, Exec exec) {
  Eigen::MatrixXd V(U.rows(), U.cols());
  for_each_index(static_cast<int>(U.cols()), exec, [&](int m) {
    V.col(m) = graph_speed(grid, Eigen::VectorXd(U.col(m)));
  });
  return V;
}

std::vector<double> star_slices(const Grid& grid, const SpaceTimeField& field,
                                const WeightParams& p, Exec exec) {
  std::vector<double> out(field.time.size());
  for_each_index(field.time.size(), exec,
                 [&](int m) { out[m] = star_slice(grid, field, p, m); });
  return out;
}

std::vector<double> kernel_samples(const Semigroup& sg, const std::vector<KernelSample>& s,
                                   Exec exec) {
  std::vector<double> out(s.size());
  for_each_index(static_cast<int>(s.size()), exec, [&](int i) {
    out[i] = std::abs(sg.kernel_nonneg(s[i].x, s[i].y, s[i].t));
  });
  return out;
}

}  // namespace ancient
