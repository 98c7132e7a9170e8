#pragma once

#include <vector>

#include <Eigen/Dense>

#include "ancient/discretization.hpp"

namespace ancient {

/// Axisymmetric normal graph Gamma = {x + u(x) nu(x)} over the grid with its
/// profile and covariant derivatives (fourth-order stencils).
struct GraphField {
  Eigen::VectorXd u;
  Eigen::VectorXd du;   // d/ds
  Eigen::VectorXd d2u;  // d^2/ds^2
  std::vector<CovariantJet> cov;

  GraphJet at(int j) const { return {u[j], du[j], d2u[j]}; }
};

GraphField make_graph_field(const Grid& grid, const Eigen::VectorXd& u);

double sup_A(const Grid& grid);

/// Throws GraphDegenerateError unless sup|u| sup|A| < 1/2.
void check_embedded(const Grid& grid, const Eigen::VectorXd& u);

struct GraphMeanCurvature {
  Eigen::VectorXd H;  // H_Gamma
  Eigen::VectorXd v;
};

GraphMeanCurvature graph_mean_curvature(const Grid& grid, const GraphField& field);

/// (Delta + |A|^2) u from the same stencils as the graph curvature.
Eigen::VectorXd jacobi_stencil(const Grid& grid, const GraphField& field);

/// E(u) = v H_Gamma(u) - L u. Zero at the two Dirichlet end nodes.
Eigen::VectorXd nonlinear_error(const Grid& grid, const GraphField& field);
Eigen::VectorXd nonlinear_error(const Grid& grid, const Eigen::VectorXd& u);

/// v H_Gamma(u) (the graphical flow speed). Zero at the two end nodes.
Eigen::VectorXd graph_speed(const Grid& grid, const Eigen::VectorXd& u);

}  // namespace ancient
