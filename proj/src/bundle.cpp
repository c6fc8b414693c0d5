#include "zeroflow/bundle.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include "zeroflow/errors.hpp"

namespace zeroflow {

namespace {

constexpr double kPi = std::numbers::pi;

std::int64_t directedKey(int a, int b) {
  return (static_cast<std::int64_t>(a) << 32) | static_cast<std::int64_t>(b);
}

} // namespace

Complex Connection::transportCoef(int from, int to) const {
  const int e = mesh->edgeIndex(from, to);
  const Complex r = rEdge[e];
  return mesh->edges[e][0] == from ? r : std::conj(r);
}

Connection trivialConnection(const SurfaceMesh& mesh) {
  Connection c;
  c.mesh = &mesh;
  c.rEdge = Eigen::VectorXcd::Ones(mesh.numEdges());
  return c;
}

Connection leviCivitaConnection(const SurfaceMesh& mesh,
                                const GeometryTables& geometry) {
  const int nv = mesh.numVertices();

  // In face (i,j,k) the outgoing edge after i->j, walking the star of i
  // counterclockwise, is i->k; the corner angle at i sits between them.
  std::unordered_map<std::int64_t, int> ccwNextTarget;
  std::unordered_map<std::int64_t, double> cornerAfter;
  ccwNextTarget.reserve(mesh.numFaces() * 3);
  cornerAfter.reserve(mesh.numFaces() * 3);
  for (int f = 0; f < mesh.numFaces(); ++f) {
    const auto& face = mesh.faces[f];
    for (int c = 0; c < 3; ++c) {
      const int i = face[c], j = face[(c + 1) % 3], k = face[(c + 2) % 3];
      ccwNextTarget[directedKey(i, j)] = k;
      cornerAfter[directedKey(i, j)] = geometry.cornerAngle[f][c];
    }
  }

  // Angular coordinate of every outgoing edge in its vertex frame, with the
  // star's total angle rescaled to 2*pi. The first outgoing edge in vertex
  // order (smallest neighbor index) pins theta = 0.
  std::unordered_map<std::int64_t, double> theta;
  theta.reserve(mesh.numFaces() * 3);
  std::vector<int> firstNeighbor(nv, -1);
  for (const auto& e : mesh.edges) {
    for (int s = 0; s < 2; ++s) {
      const int i = e[s], j = e[1 - s];
      if (firstNeighbor[i] < 0 || j < firstNeighbor[i]) firstNeighbor[i] = j;
    }
  }
  for (int i = 0; i < nv; ++i) {
    const int start = firstNeighbor[i];
    if (start < 0) fail("NotClosed", "isolated vertex " + std::to_string(i));
    double running = 0.0;
    int j = start;
    std::vector<std::pair<int, double>> walked;
    do {
      walked.emplace_back(j, running);
      const auto key = directedKey(i, j);
      running += cornerAfter.at(key);
      j = ccwNextTarget.at(key);
    } while (j != start);
    const double scale = 2.0 * kPi / running;
    for (const auto& [target, angle] : walked)
      theta[directedKey(i, target)] = angle * scale;
  }

  Connection c;
  c.mesh = &mesh;
  c.rEdge.resize(mesh.numEdges());
  for (int e = 0; e < mesh.numEdges(); ++e) {
    const int i = mesh.edges[e][0], j = mesh.edges[e][1];
    const double rot =
        theta.at(directedKey(j, i)) + kPi - theta.at(directedKey(i, j));
    c.rEdge[e] = std::polar(1.0, rot);
  }
  return c;
}

Connection readConnectionCsv(const SurfaceMesh& mesh, std::istream& in) {
  Connection c;
  c.mesh = &mesh;
  c.rEdge = Eigen::VectorXcd::Zero(mesh.numEdges());
  Eigen::VectorXi seen = Eigen::VectorXi::Zero(mesh.numEdges());
  std::string line;
  int lineNumber = 0;
  while (std::getline(in, line)) {
    ++lineNumber;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string si, sj, sre, sim;
    if (!std::getline(ls, si, ',') || !std::getline(ls, sj, ',') ||
        !std::getline(ls, sre, ',') || !std::getline(ls, sim, ','))
      fail("ParseError", "connection row needs i,j,re,im at line " +
                             std::to_string(lineNumber));
    int i, j;
    Complex r;
    try {
      i = std::stoi(si);
      j = std::stoi(sj);
      r = Complex(std::stod(sre), std::stod(sim));
    } catch (const std::exception&) {
      fail("ParseError",
           "bad connection number at line " + std::to_string(lineNumber));
    }
    if (std::abs(std::abs(r) - 1.0) > 1e-12)
      fail("NotUnitary", "|r| deviates from 1 at line " +
                             std::to_string(lineNumber));
    const int e = mesh.edgeIndex(i, j);
    c.rEdge[e] = mesh.edges[e][0] == i ? r : std::conj(r);
    seen[e] = 1;
  }
  if (seen.sum() != mesh.numEdges())
    fail("ParseError", "connection file leaves edges unassigned");
  return c;
}

Connection loadConnection(const SurfaceMesh& mesh, const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("IoError", "cannot open connection file " + path);
  return readConnectionCsv(mesh, in);
}

Complex faceHolonomy(const Connection& connection, int face) {
  const auto& f = connection.mesh->faces[face];
  return connection.transportCoef(f[2], f[0]) *
         connection.transportCoef(f[1], f[2]) *
         connection.transportCoef(f[0], f[1]);
}

Curvature curvatureFromHolonomy(const SurfaceMesh& mesh,
                                const Connection& connection) {
  Curvature curvature;
  curvature.omega.resize(mesh.numFaces());
  for (int f = 0; f < mesh.numFaces(); ++f) {
    const double omega = std::arg(faceHolonomy(connection, f));
    if (std::abs(omega) > kPi - 1e-6)
      fail("BranchBoundary", "face " + std::to_string(f) +
                                 " holonomy sits at the +-pi branch cut; "
                                 "triangulation too coarse");
    curvature.omega[f] = omega;
  }
  return curvature;
}

Curvature readCurvatureCsv(const SurfaceMesh& mesh,
                           const Connection& connection, std::istream& in) {
  Curvature curvature;
  curvature.omega = Eigen::VectorXd::Constant(
      mesh.numFaces(), std::numeric_limits<double>::quiet_NaN());
  std::string line;
  int lineNumber = 0;
  while (std::getline(in, line)) {
    ++lineNumber;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string sf, so;
    if (!std::getline(ls, sf, ',') || !std::getline(ls, so, ','))
      fail("ParseError",
           "curvature row needs face,omega at line " + std::to_string(lineNumber));
    int f;
    double omega;
    try {
      f = std::stoi(sf);
      omega = std::stod(so);
    } catch (const std::exception&) {
      fail("ParseError",
           "bad curvature number at line " + std::to_string(lineNumber));
    }
    if (f < 0 || f >= mesh.numFaces())
      fail("ParseError",
           "face id out of range at line " + std::to_string(lineNumber));
    curvature.omega[f] = omega;
  }
  for (int f = 0; f < mesh.numFaces(); ++f) {
    if (std::isnan(curvature.omega[f]))
      fail("ParseError", "curvature missing for face " + std::to_string(f));
    const Complex holonomy = faceHolonomy(connection, f);
    if (std::abs(holonomy - std::polar(1.0, curvature.omega[f])) > 1e-9)
      fail("HolonomyMismatch",
           "face " + std::to_string(f) +
               " omega violates the holonomy constraint mod 2*pi");
  }
  return curvature;
}

Curvature loadCurvature(const SurfaceMesh& mesh, const Connection& connection,
                        const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("IoError", "cannot open curvature file " + path);
  return readCurvatureCsv(mesh, connection, in);
}

int degree(const Curvature& curvature) {
  const double raw = curvature.omega.sum() / (2.0 * kPi);
  const double rounded = std::round(raw);
  if (std::abs(raw - rounded) > 1e-6)
    fail("NotInteger", "sum of omega / 2*pi = " + std::to_string(raw) +
                           " is not an integer; connection and curvature "
                           "are inconsistent");
  return static_cast<int>(rounded);
}

Complex transport(const Connection& connection,
                  const std::vector<std::pair<int, int>>& path, Complex value) {
  for (std::size_t s = 0; s < path.size(); ++s) {
    if (s > 0 && path[s - 1].second != path[s].first)
      fail("DisconnectedPath",
           "edge " + std::to_string(s) + " does not start where edge " +
               std::to_string(s - 1) + " ends");
    value *= connection.transportCoef(path[s].first, path[s].second);
  }
  return value;
}

} // namespace zeroflow
