#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "zeroflow/bundle.hpp"
#include "zeroflow/mesh.hpp"

namespace zeroflow {

/// Diagonal mass matrix of vertex dual areas.
struct MassMatrix {
  Eigen::VectorXd diag;

  int size() const { return static_cast<int>(diag.size()); }
};

MassMatrix massMatrix(const GeometryTables& geometry);

/// Hermitian connection Laplacian: L_ij = -w_ij * conj(r_ij) on edges,
/// L_ii = sum of incident cotan weights. Positive semi-definite; strictly
/// positive definite for non-trivial holonomy.
struct ConnectionLaplacian {
  Eigen::SparseMatrix<Complex> matrix;

  int size() const { return static_cast<int>(matrix.rows()); }
};

ConnectionLaplacian assembleLaplacian(const SurfaceMesh& mesh,
                                      const GeometryTables& geometry,
                                      const Connection& connection);

/// Hermitian quadratic form phi^* L phi. The imaginary residue must stay
/// below 1e-10 relative, else NonRealEnergy.
double dirichletEnergy(const ConnectionLaplacian& laplacian,
                       const Eigen::VectorXcd& phi);

} // namespace zeroflow
