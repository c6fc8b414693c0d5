#pragma once

#include <Eigen/Core>

#include "zeroflow/bundle.hpp"
#include "zeroflow/mesh.hpp"

namespace zeroflow {

/// Edge rotation angles xi_ij = arg(phi_j / (r_ij phi_i)) in (-pi, pi),
/// stored once per undirected edge (i<j direction); xi_ji = -xi_ij exactly.
struct RotationForm {
  const SurfaceMesh* mesh = nullptr;
  Eigen::VectorXd xi;

  double value(int from, int to) const;
};

/// Throws ZeroAtVertex when |phi_i| < 1e-12 * ||phi||_inf and AntipodalEdge
/// when the transported value is within 1e-9 of the negative axis.
RotationForm rotationForm(const Eigen::VectorXcd& phi,
                          const Connection& connection);

/// (xi_ij + xi_jk + xi_ki + omega) / 2pi, rounded to the nearest integer;
/// NotInteger if the pre-rounding value strays by more than 1e-6.
int faceIndex(const Eigen::VectorXcd& phi, const Connection& connection,
              const Curvature& curvature, int face);

/// All face indices of a section in one pass over the rotation form.
Eigen::VectorXi faceIndices(const Eigen::VectorXcd& phi,
                            const Connection& connection,
                            const Curvature& curvature);

int totalIndex(const Eigen::VectorXcd& phi, const Connection& connection,
               const Curvature& curvature);

struct IndexField {
  Eigen::VectorXi ind;      // per face
  Eigen::VectorXd density;  // ind / faceArea
};

IndexField indexDensity(const Eigen::VectorXcd& phi,
                        const Connection& connection,
                        const Curvature& curvature,
                        const GeometryTables& geometry);

} // namespace zeroflow
