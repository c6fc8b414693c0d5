#include "zeroflow/laplace.hpp"

#include <cmath>
#include <vector>

#include "zeroflow/errors.hpp"

namespace zeroflow {

MassMatrix massMatrix(const GeometryTables& geometry) {
  return MassMatrix{geometry.dualArea};
}

ConnectionLaplacian assembleLaplacian(const SurfaceMesh& mesh,
                                      const GeometryTables& geometry,
                                      const Connection& connection) {
  const int n = mesh.numVertices();
  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(mesh.numEdges() * 2 + n);
  Eigen::VectorXd diagonal = Eigen::VectorXd::Zero(n);
  for (int e = 0; e < mesh.numEdges(); ++e) {
    const int i = mesh.edges[e][0], j = mesh.edges[e][1];
    const double w = geometry.cotanWeight[e];
    const Complex r = connection.rEdge[e]; // transport i -> j
    triplets.emplace_back(i, j, -w * std::conj(r));
    triplets.emplace_back(j, i, -w * r);
    diagonal[i] += w;
    diagonal[j] += w;
  }
  for (int i = 0; i < n; ++i) triplets.emplace_back(i, i, Complex(diagonal[i], 0.0));

  ConnectionLaplacian laplacian;
  laplacian.matrix.resize(n, n);
  laplacian.matrix.setFromTriplets(triplets.begin(), triplets.end());
  laplacian.matrix.makeCompressed();
  return laplacian;
}

double dirichletEnergy(const ConnectionLaplacian& laplacian,
                       const Eigen::VectorXcd& phi) {
  if (phi.size() != laplacian.size())
    fail("ShapeMismatch", "section length does not match the Laplacian");
  const Complex energy = phi.dot(laplacian.matrix * phi); // conjugates phi
  const double scale = std::max(std::abs(energy), 1.0);
  if (std::abs(energy.imag()) > 1e-10 * scale)
    fail("NonRealEnergy", "imaginary residue " +
                              std::to_string(energy.imag()) +
                              " exceeds tolerance; Hermitian assembly broken");
  return energy.real();
}

} // namespace zeroflow
