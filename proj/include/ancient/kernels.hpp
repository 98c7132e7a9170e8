#pragma once

#include <vector>

#include <Eigen/Dense>

#include "ancient/common.hpp"
#include "ancient/norms.hpp"
#include "ancient/spectral.hpp"

// Data-parallel inner loops. Each has a serial reference and an OpenMP
// version; both write disjoint slots and perform no cross-thread reductions,
// so their outputs agree bit for bit.
namespace ancient {

/// Eigendecompositions of modes 0..K.
std::vector<ModeSpectrum> mode_spectra(const Grid& grid, int K, Exec exec,
                                       Vectors vectors = Vectors::all);

/// E(u) on every time slice; columns of U are slices.
Eigen::MatrixXd nonlinear_error_slices(const Grid& grid, const Eigen::MatrixXd& U, Exec exec);

/// v H_Gamma(u) on every time slice.
Eigen::MatrixXd graph_speed_slices(const Grid& grid, const Eigen::MatrixXd& U, Exec exec);

/// star_slice for every time slice.
std::vector<double> star_slices(const Grid& grid, const SpaceTimeField& field,
                                const WeightParams& p, Exec exec);

/// |G^{>=0}(x, y, t)| for each sample.
std::vector<double> kernel_samples(const Semigroup& sg, const std::vector<KernelSample>& s,
                                   Exec exec);

}  // namespace ancient
