#include "zeroflow/index.hpp"

#include <cmath>
#include <numbers>

#include "zeroflow/errors.hpp"

namespace zeroflow {

namespace {
constexpr double kPi = std::numbers::pi;
}

double RotationForm::value(int from, int to) const {
  const int e = mesh->edgeIndex(from, to);
  return mesh->edges[e][0] == from ? xi[e] : -xi[e];
}

RotationForm rotationForm(const Eigen::VectorXcd& phi,
                          const Connection& connection) {
  const SurfaceMesh& mesh = *connection.mesh;
  if (phi.size() != mesh.numVertices())
    fail("ShapeMismatch", "section length does not match the mesh");

  const double floor = 1e-12 * phi.cwiseAbs().maxCoeff();
  for (int i = 0; i < phi.size(); ++i)
    if (std::abs(phi[i]) < floor)
      fail("ZeroAtVertex", "section vanishes at vertex " + std::to_string(i));

  RotationForm form;
  form.mesh = &mesh;
  form.xi.resize(mesh.numEdges());
  for (int e = 0; e < mesh.numEdges(); ++e) {
    const int i = mesh.edges[e][0], j = mesh.edges[e][1];
    const double angle = std::arg(phi[j] * std::conj(connection.rEdge[e] * phi[i]));
    if (std::abs(angle) > kPi - 1e-9)
      fail("AntipodalEdge", "transported value antipodal on edge (" +
                                std::to_string(i) + "," + std::to_string(j) +
                                ")");
    form.xi[e] = angle;
  }
  return form;
}

namespace {

int roundedIndex(double dxi, double omega, int face) {
  const double raw = (dxi + omega) / (2.0 * kPi);
  const double rounded = std::round(raw);
  if (std::abs(raw - rounded) > 1e-6)
    fail("NotInteger", "face " + std::to_string(face) + " index " +
                           std::to_string(raw) +
                           " is not an integer; omega and the connection "
                           "disagree");
  return static_cast<int>(rounded);
}

} // namespace

int faceIndex(const Eigen::VectorXcd& phi, const Connection& connection,
              const Curvature& curvature, int face) {
  const RotationForm form = rotationForm(phi, connection);
  const auto& f = connection.mesh->faces[face];
  const double dxi = form.value(f[0], f[1]) + form.value(f[1], f[2]) +
                     form.value(f[2], f[0]);
  return roundedIndex(dxi, curvature.omega[face], face);
}

Eigen::VectorXi faceIndices(const Eigen::VectorXcd& phi,
                            const Connection& connection,
                            const Curvature& curvature) {
  const SurfaceMesh& mesh = *connection.mesh;
  const RotationForm form = rotationForm(phi, connection);
  Eigen::VectorXi ind(mesh.numFaces());
  for (int face = 0; face < mesh.numFaces(); ++face) {
    const auto& f = mesh.faces[face];
    const double dxi = form.value(f[0], f[1]) + form.value(f[1], f[2]) +
                       form.value(f[2], f[0]);
    ind[face] = roundedIndex(dxi, curvature.omega[face], face);
  }
  return ind;
}

int totalIndex(const Eigen::VectorXcd& phi, const Connection& connection,
               const Curvature& curvature) {
  return faceIndices(phi, connection, curvature).sum();
}

IndexField indexDensity(const Eigen::VectorXcd& phi,
                        const Connection& connection,
                        const Curvature& curvature,
                        const GeometryTables& geometry) {
  IndexField field;
  field.ind = faceIndices(phi, connection, curvature);
  field.density =
      field.ind.cast<double>().cwiseQuotient(geometry.faceArea);
  return field;
}

} // namespace zeroflow
