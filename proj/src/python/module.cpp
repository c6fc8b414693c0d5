#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "zeroflow/bundle.hpp"
#include "zeroflow/density.hpp"
#include "zeroflow/errors.hpp"
#include "zeroflow/index.hpp"
#include "zeroflow/laplace.hpp"
#include "zeroflow/mesh.hpp"
#include "zeroflow/montecarlo.hpp"
#include "zeroflow/spectral.hpp"

namespace py = pybind11;
using namespace zeroflow;

namespace {

Eigen::MatrixXd vertexArray(const SurfaceMesh& mesh) {
  Eigen::MatrixXd out(mesh.numVertices(), 3);
  for (int i = 0; i < mesh.numVertices(); ++i) out.row(i) = mesh.vertices[i];
  return out;
}

Eigen::MatrixXi faceArray(const SurfaceMesh& mesh) {
  Eigen::MatrixXi out(mesh.numFaces(), 3);
  for (int f = 0; f < mesh.numFaces(); ++f)
    for (int c = 0; c < 3; ++c) out(f, c) = mesh.faces[f][c];
  return out;
}

// Precomputed bundle pipeline over one mesh; the entry point for python use.
class Setup {
public:
  explicit Setup(const SurfaceMesh& mesh) : mesh_(mesh) {
    geometry_ = computeGeometry(mesh_);
    connection_ = leviCivitaConnection(mesh_, geometry_);
    curvature_ = curvatureFromHolonomy(mesh_, connection_);
    mass_ = massMatrix(geometry_);
    laplacian_ = assembleLaplacian(mesh_, geometry_, connection_);
  }

  const SurfaceMesh& mesh() const { return mesh_; }
  Eigen::VectorXd curvature() const { return curvature_.omega; }
  Eigen::VectorXd faceAreas() const { return geometry_.faceArea; }
  Eigen::VectorXd dualAreas() const { return geometry_.dualArea; }
  int degree() const { return zeroflow::degree(curvature_); }
  Eigen::MatrixXcd laplacianDense() const {
    return Eigen::MatrixXcd(laplacian_.matrix);
  }

  void solveBasis(int k, double tol) {
    basis_ = k == 0 ? denseEigenbasis(laplacian_, mass_)
                    : smallestEigenpairs(laplacian_, mass_, k, tol);
  }
  Eigen::VectorXd eigenvalues() {
    ensureBasis();
    return basis_.eigenvalues;
  }
  Eigen::MatrixXcd eigenvectors() {
    ensureBasis();
    return basis_.eigenvectors;
  }

  Eigen::VectorXcd smooth(const Eigen::VectorXcd& phi, double t) {
    ensureBasis();
    return smoothSection(basis_, mass_, phi, t);
  }
  Eigen::VectorXi faceIndexField(const Eigen::VectorXcd& phi) const {
    return faceIndices(phi, connection_, curvature_);
  }
  double energy(const Eigen::VectorXcd& phi) const {
    return dirichletEnergy(laplacian_, phi);
  }
  Eigen::VectorXd expectedIndex(double t) {
    ensureBasis();
    return expectedIndexField(basis_, connection_, curvature_, mesh_, t);
  }
  Eigen::VectorXd expectedDensity(double t) {
    ensureBasis();
    return expectedDensityField(basis_, connection_, curvature_, mesh_,
                                geometry_, t);
  }
  std::pair<std::vector<double>, std::vector<double>> omegaCurve(int face) {
    ensureBasis();
    const OmegaTrack track =
        omegaTrack(basis_, curvature_, mesh_, face, defaultSchedule(basis_));
    return {track.tGrid, track.omega};
  }
  py::dict monteCarlo(double t, std::int64_t samples, std::uint64_t seed,
                      int k, int workers) {
    ensureBasis();
    const int modes = k == 0 ? basis_.count() : k;
    const SampleStats stats = empiricalIndexStats(
        basis_, connection_, curvature_, mesh_, t, samples, seed, modes,
        workers);
    py::dict out;
    out["samples"] = stats.samples;
    out["degenerate"] = stats.degenerate;
    out["mean"] = stats.mean;
    out["stderr"] = stats.standardError;
    out["mean_total"] = stats.meanTotal;
    return out;
  }

private:
  void ensureBasis() {
    if (basis_.count() == 0) solveBasis(0, 1e-9);
  }

  SurfaceMesh mesh_;
  GeometryTables geometry_;
  Connection connection_;
  Curvature curvature_;
  MassMatrix mass_;
  ConnectionLaplacian laplacian_;
  EigenBasis basis_;
};

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "expected signed-zero densities of heat-smoothed random sections "
            "of hermitian line bundles on closed triangle meshes";

  py::register_exception<Error>(m, "ZeroflowError");

  py::class_<SurfaceMesh>(m, "SurfaceMesh")
      .def_property_readonly("num_vertices", &SurfaceMesh::numVertices)
      .def_property_readonly("num_edges", &SurfaceMesh::numEdges)
      .def_property_readonly("num_faces", &SurfaceMesh::numFaces)
      .def("vertices", &vertexArray)
      .def("faces", &faceArray)
      .def("rotate",
           [](SurfaceMesh& mesh, const Eigen::Vector3d& axis, double angle) {
             rotateMesh(mesh, axis, angle);
           })
      .def("scale", [](SurfaceMesh& mesh, const Eigen::Vector3d& factors) {
        scaleMesh(mesh, factors);
      });

  m.def("load_mesh", &loadMesh, py::arg("path"));
  m.def("icosahedron", &makeIcosahedron);
  m.def("icosphere", &makeIcosphere, py::arg("subdivisions"));
  m.def("mean_principal_phase", &meanPrincipalPhase, py::arg("k"),
        py::arg("theta"));

  py::class_<Setup>(m, "Setup")
      .def(py::init<const SurfaceMesh&>(), py::arg("mesh"))
      .def_property_readonly("mesh", &Setup::mesh)
      .def("curvature", &Setup::curvature)
      .def("face_areas", &Setup::faceAreas)
      .def("dual_areas", &Setup::dualAreas)
      .def("degree", &Setup::degree)
      .def("laplacian_dense", &Setup::laplacianDense)
      .def("solve_basis", &Setup::solveBasis, py::arg("k") = 0,
           py::arg("tol") = 1e-9)
      .def("eigenvalues", &Setup::eigenvalues)
      .def("eigenvectors", &Setup::eigenvectors)
      .def("smooth", &Setup::smooth, py::arg("phi"), py::arg("t"))
      .def("face_indices", &Setup::faceIndexField, py::arg("phi"))
      .def("dirichlet_energy", &Setup::energy, py::arg("phi"))
      .def("expected_index", &Setup::expectedIndex, py::arg("t"))
      .def("expected_density", &Setup::expectedDensity, py::arg("t"))
      .def("omega_curve", &Setup::omegaCurve, py::arg("face"))
      .def("monte_carlo", &Setup::monteCarlo, py::arg("t"), py::arg("samples"),
           py::arg("seed") = 1, py::arg("k") = 0, py::arg("workers") = 1);
}
