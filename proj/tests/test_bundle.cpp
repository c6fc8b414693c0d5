#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "test_meshes.hpp"
#include "zeroflow/bundle.hpp"
#include "zeroflow/errors.hpp"

using namespace zeroflow;
namespace {
constexpr double kPi = std::numbers::pi;

double angleDefect(const SurfaceMesh& mesh, const GeometryTables& g, int i) {
  double total = 0.0;
  for (int f = 0; f < mesh.numFaces(); ++f)
    for (int c = 0; c < 3; ++c)
      if (mesh.faces[f][c] == i) total += g.cornerAngle[f][c];
  return 2.0 * kPi - total;
}

// Tetrahedron connection with r = e^{i rot} along the oriented boundary of
// face 0 and identity elsewhere.
Connection faceLoopConnection(const SurfaceMesh& mesh, double rot) {
  std::ostringstream csv;
  csv.precision(17);
  const auto& f0 = mesh.faces[0];
  for (int e = 0; e < mesh.numEdges(); ++e) {
    int i = mesh.edges[e][0], j = mesh.edges[e][1];
    bool onFace0 = false;
    for (int c = 0; c < 3; ++c)
      if (f0[c] == i && f0[(c + 1) % 3] == j) onFace0 = true;
    for (int c = 0; c < 3; ++c)
      if (f0[c] == j && f0[(c + 1) % 3] == i) std::swap(i, j), onFace0 = true;
    const Complex r = onFace0 ? std::polar(1.0, rot) : Complex(1.0, 0.0);
    csv << i << ',' << j << ',' << r.real() << ',' << r.imag() << '\n';
  }
  std::istringstream in(csv.str());
  return readConnectionCsv(mesh, in);
}

} // namespace

TEST_CASE("trivial connection has zero curvature and degree zero") {
  const SurfaceMesh mesh = makeIcosahedron();
  const Connection connection = trivialConnection(mesh);
  const Curvature curvature = curvatureFromHolonomy(mesh, connection);
  CHECK(curvature.omega.cwiseAbs().maxCoeff() == 0.0);
  CHECK(degree(curvature) == 0);
}

TEST_CASE("levi-civita on the icosahedron") {
  const SurfaceMesh mesh = makeIcosahedron();
  const GeometryTables g = computeGeometry(mesh);
  const Connection connection = leviCivitaConnection(mesh, g);

  SUBCASE("transport coefficients are unitary") {
    for (int e = 0; e < mesh.numEdges(); ++e)
      CHECK(std::abs(std::abs(connection.rEdge[e]) - 1.0) < 1e-12);
  }
  SUBCASE("reverse transport is the conjugate inverse") {
    const int i = mesh.edges[0][0], j = mesh.edges[0][1];
    CHECK(connection.transportCoef(i, j) ==
          std::conj(connection.transportCoef(j, i)));
    CHECK(std::abs(connection.transportCoef(i, j) *
                       connection.transportCoef(j, i) -
                   1.0) < 1e-15);
  }
  SUBCASE("every face carries curvature pi/5 and the degree is two") {
    const Curvature curvature = curvatureFromHolonomy(mesh, connection);
    for (int f = 0; f < mesh.numFaces(); ++f)
      CHECK(curvature.omega[f] == doctest::Approx(kPi / 5).epsilon(1e-12));
    CHECK(degree(curvature) == 2);
  }
  SUBCASE("total curvature equals the angle-defect total (Gauss-Bonnet)") {
    const Curvature curvature = curvatureFromHolonomy(mesh, connection);
    double defects = 0.0;
    for (int i = 0; i < mesh.numVertices(); ++i)
      defects += angleDefect(mesh, g, i);
    CHECK(curvature.omega.sum() == doctest::Approx(defects).epsilon(1e-12));
    CHECK(curvature.omega.sum() == doctest::Approx(4.0 * kPi).epsilon(1e-12));
  }
}

TEST_CASE("gauss-bonnet on irregular meshes") {
  for (int level : {0, 1}) {
    const SurfaceMesh mesh = zftest::rotatedEllipsoid(level);
    const GeometryTables g = computeGeometry(mesh);
    const Connection connection = leviCivitaConnection(mesh, g);
    const Curvature curvature = curvatureFromHolonomy(mesh, connection);
    double defects = 0.0;
    for (int i = 0; i < mesh.numVertices(); ++i)
      defects += angleDefect(mesh, g, i);
    CHECK(curvature.omega.sum() == doctest::Approx(defects).epsilon(1e-9));
    CHECK(degree(curvature) == 2);
  }
}

TEST_CASE("flat interior of a gridded cube has zero holonomy") {
  const SurfaceMesh mesh = zftest::gridCube(4);
  const GeometryTables g = computeGeometry(mesh);
  const Connection connection = leviCivitaConnection(mesh, g);
  const Curvature curvature = curvatureFromHolonomy(mesh, connection);
  CHECK(degree(curvature) == 2);

  // faces whose three vertices all have flat stars (grid-interior points)
  std::vector<bool> flat(mesh.numVertices(), false);
  for (int i = 0; i < mesh.numVertices(); ++i)
    flat[i] = std::abs(angleDefect(mesh, g, i)) < 1e-12;
  int flatFaces = 0;
  for (int f = 0; f < mesh.numFaces(); ++f) {
    const auto& face = mesh.faces[f];
    if (flat[face[0]] && flat[face[1]] && flat[face[2]]) {
      CHECK(std::abs(curvature.omega[f]) < 1e-12);
      ++flatFaces;
    }
  }
  CHECK(flatFaces > 0);
}

TEST_CASE("prescribed per-edge rotation around one face") {
  const SurfaceMesh mesh = zftest::tetrahedron();
  const Connection connection = faceLoopConnection(mesh, 2.0 * kPi / 9.0);
  const Curvature curvature = curvatureFromHolonomy(mesh, connection);
  CHECK(curvature.omega[0] == doctest::Approx(2.0 * kPi / 3).epsilon(1e-12));
}

TEST_CASE("regular tetrahedron curvature sits at the branch cut") {
  // angle defect 4*pi spread over 4 faces puts every holonomy at e^{i pi}
  const SurfaceMesh mesh = zftest::tetrahedron();
  const GeometryTables g = computeGeometry(mesh);
  const Connection connection = leviCivitaConnection(mesh, g);
  CHECK_THROWS_WITH_AS(curvatureFromHolonomy(mesh, connection),
                       doctest::Contains("BranchBoundary"), Error);
}

TEST_CASE("holonomy at the branch cut is rejected") {
  const SurfaceMesh mesh = zftest::tetrahedron();
  const Connection connection = faceLoopConnection(mesh, kPi / 3.0);
  // face 0 holonomy = e^{i pi}
  CHECK_THROWS_WITH_AS(curvatureFromHolonomy(mesh, connection),
                       doctest::Contains("BranchBoundary"), Error);
}

TEST_CASE("external curvature") {
  const SurfaceMesh mesh = makeIcosahedron();
  const GeometryTables g = computeGeometry(mesh);
  const Connection connection = leviCivitaConnection(mesh, g);
  const Curvature base = curvatureFromHolonomy(mesh, connection);

  SUBCASE("a 2 pi shift on one face raises the degree by one") {
    std::ostringstream csv;
    csv.precision(17);
    for (int f = 0; f < mesh.numFaces(); ++f)
      csv << f << ',' << (base.omega[f] + (f == 0 ? 2.0 * kPi : 0.0)) << '\n';
    std::istringstream in(csv.str());
    const Curvature shifted = readCurvatureCsv(mesh, connection, in);
    CHECK(degree(shifted) == degree(base) + 1);
  }
  SUBCASE("omega violating the holonomy constraint is rejected") {
    std::ostringstream csv;
    for (int f = 0; f < mesh.numFaces(); ++f)
      csv << f << ',' << (base.omega[f] + (f == 0 ? 0.25 : 0.0)) << '\n';
    std::istringstream in(csv.str());
    CHECK_THROWS_WITH_AS(readCurvatureCsv(mesh, connection, in),
                         doctest::Contains("HolonomyMismatch"), Error);
  }
  SUBCASE("degree rejects a non-integer total") {
    Curvature corrupt = base;
    corrupt.omega[0] += 0.1;
    CHECK_THROWS_WITH_AS(degree(corrupt), doctest::Contains("NotInteger"),
                         Error);
  }
}

TEST_CASE("parallel transport") {
  const SurfaceMesh mesh = makeIcosahedron();
  const GeometryTables g = computeGeometry(mesh);
  const Connection connection = leviCivitaConnection(mesh, g);
  const Curvature curvature = curvatureFromHolonomy(mesh, connection);
  const Complex value(0.3, -0.7);

  SUBCASE("empty path is the identity") {
    CHECK(transport(connection, {}, value) == value);
  }
  SUBCASE("edge followed by its reverse is the identity") {
    const int i = mesh.edges[0][0], j = mesh.edges[0][1];
    const Complex out = transport(connection, {{i, j}, {j, i}}, value);
    CHECK(std::abs(out - value) < 1e-14);
  }
  SUBCASE("a face loop multiplies by the holonomy") {
    for (int f = 0; f < mesh.numFaces(); ++f) {
      const auto& face = mesh.faces[f];
      const Complex out = transport(
          connection,
          {{face[0], face[1]}, {face[1], face[2]}, {face[2], face[0]}}, value);
      CHECK(std::abs(out - value * std::polar(1.0, curvature.omega[f])) <
            1e-9);
      CHECK(std::abs(std::abs(out) - std::abs(value)) < 1e-12);
    }
  }
  SUBCASE("disconnected paths are rejected") {
    const auto& face = mesh.faces[0];
    // find a vertex not on face 0
    int other = 0;
    while (other == face[0] || other == face[1] || other == face[2]) ++other;
    int neighbor = -1;
    for (const auto& e : mesh.edges) {
      if (e[0] == other) neighbor = e[1];
      if (e[1] == other) neighbor = e[0];
    }
    CHECK_THROWS_WITH_AS(
        transport(connection, {{face[0], face[1]}, {other, neighbor}}, value),
        doctest::Contains("DisconnectedPath"), Error);
  }
}

TEST_CASE("connection csv must cover every edge and be unitary") {
  const SurfaceMesh mesh = zftest::tetrahedron();
  SUBCASE("missing edges") {
    std::istringstream in("0,1,1,0\n");
    CHECK_THROWS_WITH_AS(readConnectionCsv(mesh, in),
                         doctest::Contains("ParseError"), Error);
  }
  SUBCASE("non-unitary entry") {
    std::istringstream in("0,1,2,0\n");
    CHECK_THROWS_WITH_AS(readConnectionCsv(mesh, in),
                         doctest::Contains("NotUnitary"), Error);
  }
}
