#include "ancient/graph.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ancient/stencils.hpp"

namespace ancient {

GraphField make_graph_field(const Grid& grid, const Eigen::VectorXd& u) {
  if (u.size() != grid.Ns) throw ParameterError("graph field has the wrong length");
  GraphField f;
  f.u = u;
  f.du.resize(grid.Ns);
  f.d2u.resize(grid.Ns);
  const UniformDerivatives D(grid.Ns);
  D.apply(std::span<const double>(u.data(), u.size()), grid.h,
          std::span<double>(f.du.data(), f.du.size()),
          std::span<double>(f.d2u.data(), f.d2u.size()));
  f.cov.resize(grid.Ns);
  for (int j = 0; j < grid.Ns; ++j) f.cov[j] = covariant_jet(grid.jets[j], grid.n(), f.at(j));
  return f;
}

double sup_A(const Grid& grid) {
  return std::sqrt(*std::max_element(grid.A2.begin(), grid.A2.end()));
}

void check_embedded(const Grid& grid, const Eigen::VectorXd& u) {
  const double bound = u.cwiseAbs().maxCoeff() * sup_A(grid);
  if (!(bound < 0.5)) {
    std::ostringstream os;
    os << "graph leaves the embedded tube: sup|u| sup|A| = " << bound;
    throw GraphDegenerateError(os.str());
  }
}

GraphMeanCurvature graph_mean_curvature(const Grid& grid, const GraphField& field) {
  check_embedded(grid, field.u);
  GraphMeanCurvature out{Eigen::VectorXd(grid.Ns), Eigen::VectorXd(grid.Ns)};
  for (int j = 0; j < grid.Ns; ++j) {
    const GraphCurvature gc = graph_curvature_from_jet(grid.jets[j], grid.n(), field.at(j));
    out.H[j] = gc.H;
    out.v[j] = gc.v;
  }
  return out;
}

Eigen::VectorXd jacobi_stencil(const Grid& grid, const GraphField& field) {
  Eigen::VectorXd Lu(grid.Ns);
  for (int j = 0; j < grid.Ns; ++j) Lu[j] = jacobi_from_jet(grid.jets[j], grid.n(), field.at(j));
  return Lu;
}

Eigen::VectorXd nonlinear_error(const Grid& grid, const GraphField& field) {
  const GraphMeanCurvature gm = graph_mean_curvature(grid, field);
  Eigen::VectorXd E = gm.v.cwiseProduct(gm.H) - jacobi_stencil(grid, field);
  E[0] = 0.0;
  E[grid.Ns - 1] = 0.0;
  return E;
}

Eigen::VectorXd nonlinear_error(const Grid& grid, const Eigen::VectorXd& u) {
  return nonlinear_error(grid, make_graph_field(grid, u));
}

Eigen::VectorXd graph_speed(const Grid& grid, const Eigen::VectorXd& u) {
  const GraphMeanCurvature gm = graph_mean_curvature(grid, make_graph_field(grid, u));
  Eigen::VectorXd s = gm.v.cwiseProduct(gm.H);
  s[0] = 0.0;
  s[grid.Ns - 1] = 0.0;
  return s;
}

}  // namespace ancient
