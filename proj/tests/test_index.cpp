#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "test_meshes.hpp"
#include "zeroflow/errors.hpp"
#include "zeroflow/index.hpp"

using namespace zeroflow;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::VectorXcd randomSectionVec(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v[i] = Complex(normal(rng), normal(rng));
  return v;
}

struct Bundle {
  SurfaceMesh mesh;
  GeometryTables geometry;
  Connection connection;
  Curvature curvature;
};

Bundle leviCivitaBundle(SurfaceMesh mesh) {
  Bundle b;
  b.mesh = std::move(mesh);
  b.geometry = computeGeometry(b.mesh);
  b.connection = leviCivitaConnection(b.mesh, b.geometry);
  b.curvature = curvatureFromHolonomy(b.mesh, b.connection);
  return b;
}

} // namespace

TEST_CASE("rotation form basics") {
  const SurfaceMesh mesh = zftest::tetrahedron();
  const Connection connection = trivialConnection(mesh);

  SUBCASE("parallel sections do not rotate") {
    const Eigen::VectorXcd constant =
        Eigen::VectorXcd::Constant(4, Complex(0.6, -0.2));
    const RotationForm form = rotationForm(constant, connection);
    CHECK(form.xi.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("a quarter turn across one edge") {
    Eigen::VectorXcd phi = Eigen::VectorXcd::Constant(4, Complex(1.0, 0.0));
    phi[1] = Complex(0.0, 1.0);
    const RotationForm form = rotationForm(phi, connection);
    CHECK(form.value(0, 1) == doctest::Approx(kPi / 2).epsilon(1e-15));
    CHECK(form.value(1, 0) == doctest::Approx(-kPi / 2).epsilon(1e-15));
  }
  SUBCASE("antisymmetry is exact") {
    const Eigen::VectorXcd phi = randomSectionVec(4, 5);
    const RotationForm form = rotationForm(phi, connection);
    for (const auto& e : mesh.edges)
      CHECK(form.value(e[0], e[1]) == -form.value(e[1], e[0]));
  }
  SUBCASE("vanishing section entries are rejected") {
    Eigen::VectorXcd phi = randomSectionVec(4, 6);
    phi[2] = 0.0;
    CHECK_THROWS_WITH_AS(rotationForm(phi, connection),
                         doctest::Contains("ZeroAtVertex"), Error);
  }
  SUBCASE("antipodal transported values are rejected") {
    Eigen::VectorXcd phi = Eigen::VectorXcd::Constant(4, Complex(1.0, 0.0));
    phi[3] = Complex(-1.0, 0.0);
    CHECK_THROWS_WITH_AS(rotationForm(phi, connection),
                         doctest::Contains("AntipodalEdge"), Error);
  }
}

TEST_CASE("rotation form and index are scale invariant") {
  const Bundle b = leviCivitaBundle(makeIcosahedron());
  const Eigen::VectorXcd phi = randomSectionVec(b.mesh.numVertices(), 17);
  const RotationForm base = rotationForm(phi, b.connection);
  const Eigen::VectorXi baseInd = faceIndices(phi, b.connection, b.curvature);

  std::mt19937 rng(99);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 100; ++trial) {
    const Complex c(normal(rng), normal(rng));
    if (std::abs(c) < 1e-12) continue;
    const RotationForm scaled = rotationForm(c * phi, b.connection);
    CHECK((scaled.xi - base.xi).cwiseAbs().maxCoeff() < 1e-12);
    const Eigen::VectorXi ind = faceIndices(c * phi, b.connection, b.curvature);
    CHECK((ind - baseInd).cwiseAbs().maxCoeff() == 0);
  }
}

TEST_CASE("self-constructed curvature bounds the index") {
  const Bundle b = leviCivitaBundle(zftest::rotatedEllipsoid(1));
  for (unsigned seed = 0; seed < 50; ++seed) {
    const Eigen::VectorXcd phi =
        randomSectionVec(b.mesh.numVertices(), 1000 + seed);
    const Eigen::VectorXi ind = faceIndices(phi, b.connection, b.curvature);
    CHECK(ind.minCoeff() >= -1);
    CHECK(ind.maxCoeff() <= 1);
  }
}

TEST_CASE("prescribed rotation cancels the curvature") {
  // r = e^{i 2pi/9} along the boundary of face 0, phi = 1: each edge
  // contributes xi = -2pi/9, so d xi = -2pi/3 cancels Omega = 2pi/3.
  const SurfaceMesh mesh = zftest::tetrahedron();
  std::ostringstream csv;
  csv.precision(17);
  const auto& f0 = mesh.faces[0];
  for (int e = 0; e < mesh.numEdges(); ++e) {
    int i = mesh.edges[e][0], j = mesh.edges[e][1];
    bool onFace0 = false;
    for (int c = 0; c < 3; ++c) {
      if (f0[c] == i && f0[(c + 1) % 3] == j) onFace0 = true;
      if (f0[c] == j && f0[(c + 1) % 3] == i) {
        std::swap(i, j);
        onFace0 = true;
      }
    }
    const Complex r =
        onFace0 ? std::polar(1.0, 2.0 * kPi / 9.0) : Complex(1.0, 0.0);
    csv << i << ',' << j << ',' << r.real() << ',' << r.imag() << '\n';
  }
  std::istringstream in(csv.str());
  const Connection connection = readConnectionCsv(mesh, in);
  const Curvature curvature = curvatureFromHolonomy(mesh, connection);
  CHECK(curvature.omega[0] == doctest::Approx(2.0 * kPi / 3).epsilon(1e-12));
  const Eigen::VectorXcd ones = Eigen::VectorXcd::Constant(4, 1.0);
  CHECK(faceIndex(ones, connection, curvature, 0) == 0);
}

TEST_CASE("index conservation over random sections") {
  const Bundle b = leviCivitaBundle(makeIcosahedron());
  const int deg = degree(b.curvature);
  CHECK(deg == 2);
  for (unsigned seed = 0; seed < 100; ++seed) {
    const Eigen::VectorXcd phi =
        randomSectionVec(b.mesh.numVertices(), 2000 + seed);
    CHECK(totalIndex(phi, b.connection, b.curvature) == deg);
  }
}

TEST_CASE("density scales inversely with area") {
  const Bundle b = leviCivitaBundle(makeIcosahedron());
  SurfaceMesh doubled = makeIcosahedron();
  scaleMesh(doubled, Eigen::Vector3d(2.0, 2.0, 2.0));
  const Bundle big = leviCivitaBundle(std::move(doubled));

  const Eigen::VectorXcd phi = randomSectionVec(b.mesh.numVertices(), 37);
  const IndexField small =
      indexDensity(phi, b.connection, b.curvature, b.geometry);
  const IndexField large =
      indexDensity(phi, big.connection, big.curvature, big.geometry);
  CHECK((small.ind - large.ind).cwiseAbs().maxCoeff() == 0);
  for (int f = 0; f < b.mesh.numFaces(); ++f)
    CHECK(large.density[f] == doctest::Approx(small.density[f] / 4.0));
}

TEST_CASE("inconsistent curvature fails the integrality check") {
  const SurfaceMesh mesh = zftest::tetrahedron();
  const Connection connection = trivialConnection(mesh);
  Curvature corrupt = curvatureFromHolonomy(mesh, connection);
  corrupt.omega[0] += 0.5;
  const Eigen::VectorXcd phi = randomSectionVec(4, 3);
  CHECK_THROWS_WITH_AS(faceIndex(phi, connection, corrupt, 0),
                       doctest::Contains("NotInteger"), Error);
}
