#include "zeroflow/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <map>
#include <sstream>

#include <Eigen/Geometry>

#include "zeroflow/errors.hpp"

namespace zeroflow {

namespace {

std::int64_t edgeKey(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::int64_t>(a) << 32) | static_cast<std::int64_t>(b);
}

double signedVolume(const std::vector<Eigen::Vector3d>& vertices,
                    const std::vector<std::array<int, 3>>& faces) {
  double volume = 0.0;
  for (const auto& f : faces) {
    volume += vertices[f[0]].dot(vertices[f[1]].cross(vertices[f[2]]));
  }
  return volume / 6.0;
}

} // namespace

int SurfaceMesh::edgeIndex(int a, int b) const {
  auto it = edgeIndexMap.find(edgeKey(a, b));
  if (it == edgeIndexMap.end())
    fail("BadEdge", "no edge between vertices " + std::to_string(a) + " and " +
                        std::to_string(b));
  return it->second;
}

double SurfaceMesh::boundingBoxDiagonal() const {
  if (vertices.empty()) return 0.0;
  Eigen::Vector3d lo = vertices.front(), hi = vertices.front();
  for (const auto& v : vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return (hi - lo).norm();
}

SurfaceMesh buildMesh(std::vector<Eigen::Vector3d> vertices,
                      std::vector<std::array<int, 3>> faces) {
  SurfaceMesh mesh;
  mesh.vertices = std::move(vertices);
  mesh.faces = std::move(faces);
  const int nv = mesh.numVertices();
  const int nf = mesh.numFaces();
  if (nv == 0 || nf == 0) fail("ParseError", "mesh has no vertices or faces");

  for (int f = 0; f < nf; ++f) {
    const auto& face = mesh.faces[f];
    for (int c = 0; c < 3; ++c) {
      if (face[c] < 0 || face[c] >= nv)
        fail("ParseError", "face " + std::to_string(f) +
                               " references vertex " + std::to_string(face[c]));
    }
    if (face[0] == face[1] || face[1] == face[2] || face[2] == face[0])
      fail("ParseError",
           "face " + std::to_string(f) + " repeats a vertex index");
  }

  // Collect incident faces per undirected edge; closedness means exactly two.
  std::map<std::int64_t, std::vector<int>> incident;
  for (int f = 0; f < nf; ++f) {
    const auto& face = mesh.faces[f];
    for (int c = 0; c < 3; ++c)
      incident[edgeKey(face[c], face[(c + 1) % 3])].push_back(f);
  }
  for (const auto& [key, fs] : incident) {
    if (fs.size() != 2) {
      const int a = static_cast<int>(key >> 32);
      const int b = static_cast<int>(key & 0xffffffff);
      fail("NotClosed", "edge (" + std::to_string(a) + "," +
                            std::to_string(b) + ") has " +
                            std::to_string(fs.size()) + " incident faces");
    }
  }

  // Orientation repair: BFS over face adjacency, flipping windings so every
  // shared edge is traversed in opposite directions by its two faces.
  auto traversesForward = [&](int f, int a, int b) {
    const auto& face = mesh.faces[f];
    for (int c = 0; c < 3; ++c)
      if (face[c] == a && face[(c + 1) % 3] == b) return true;
    return false;
  };
  std::vector<int> state(nf, -1); // -1 unvisited, 0 keep, 1 flipped
  std::deque<int> queue;
  state[0] = 0;
  queue.push_back(0);
  int visited = 1;
  while (!queue.empty()) {
    const int f = queue.front();
    queue.pop_front();
    const auto& face = mesh.faces[f];
    for (int c = 0; c < 3; ++c) {
      int a = face[c], b = face[(c + 1) % 3];
      if (state[f] == 1) std::swap(a, b); // orientation after flip
      const auto& fs = incident[edgeKey(a, b)];
      const int g = fs[0] == f ? fs[1] : fs[0];
      // Neighbor must traverse (b,a) after its own flip state is applied.
      const bool gForward = traversesForward(g, a, b);
      const int wanted = gForward ? 1 : 0;
      if (state[g] == -1) {
        state[g] = wanted;
        queue.push_back(g);
        ++visited;
      } else if (state[g] != wanted) {
        fail("NonOrientable", "windings contradict around face " +
                                  std::to_string(g));
      }
    }
  }
  if (visited != nf)
    fail("NotClosed", "mesh has " + std::to_string(nf - visited) +
                          " faces disconnected from face 0");
  for (int f = 0; f < nf; ++f)
    if (state[f] == 1) std::swap(mesh.faces[f][1], mesh.faces[f][2]);

  // Normalize the global orientation so the enclosed volume is positive.
  if (signedVolume(mesh.vertices, mesh.faces) < 0.0)
    for (auto& face : mesh.faces) std::swap(face[1], face[2]);

  // Derived edge tables.
  mesh.edgeIndexMap.reserve(incident.size() * 2);
  for (const auto& [key, fs] : incident) {
    const int a = static_cast<int>(key >> 32);
    const int b = static_cast<int>(key & 0xffffffff);
    const int e = static_cast<int>(mesh.edges.size());
    mesh.edges.push_back({a, b});
    mesh.edgeFaces.push_back({fs[0], fs[1]});
    mesh.edgeIndexMap.emplace(key, e);
  }

  // Consistency: every undirected edge appears once per direction.
  std::map<std::int64_t, int> directed;
  for (const auto& face : mesh.faces)
    for (int c = 0; c < 3; ++c) {
      const std::int64_t key =
          (static_cast<std::int64_t>(face[c]) << 32) | face[(c + 1) % 3];
      if (++directed[key] > 1)
        fail("NonOrientable", "directed edge repeated after repair");
    }

  const double diagonal = mesh.boundingBoxDiagonal();
  const double areaFloor = 1e-12 * diagonal * diagonal;
  for (int f = 0; f < nf; ++f) {
    if (faceArea(mesh, f) < areaFloor)
      fail("DegenerateFace", "face " + std::to_string(f) +
                                 " has area below 1e-12 * bbox diagonal^2");
  }
  return mesh;
}

SurfaceMesh readObj(std::istream& in) {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 3>> faces;
  std::string line;
  int lineNumber = 0;
  while (std::getline(in, line)) {
    ++lineNumber;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag.empty() || tag[0] == '#') continue;
    if (tag == "v") {
      Eigen::Vector3d p;
      if (!(ls >> p.x() >> p.y() >> p.z()))
        fail("ParseError", "bad vertex record at line " +
                               std::to_string(lineNumber));
      vertices.push_back(p);
    } else if (tag == "f") {
      std::vector<int> ids;
      std::string token;
      while (ls >> token) {
        // "i", "i/t", "i/t/n", "i//n" all start with the vertex index.
        const std::size_t slash = token.find('/');
        int id = 0;
        try {
          id = std::stoi(token.substr(0, slash));
        } catch (const std::exception&) {
          fail("ParseError", "bad face token '" + token + "' at line " +
                                 std::to_string(lineNumber));
        }
        if (id <= 0)
          fail("ParseError", "face indices must be positive at line " +
                                 std::to_string(lineNumber));
        ids.push_back(id - 1);
      }
      if (ids.size() != 3)
        fail("ParseError", "face with " + std::to_string(ids.size()) +
                               " vertices at line " +
                               std::to_string(lineNumber) +
                               " (triangles only)");
      faces.push_back({ids[0], ids[1], ids[2]});
    }
    // all other record types ignored
  }
  return buildMesh(std::move(vertices), std::move(faces));
}

SurfaceMesh readMeshCsv(std::istream& in) {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 3>> faces;
  std::string line;
  int lineNumber = 0;
  while (std::getline(in, line)) {
    ++lineNumber;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.empty()) continue;
    try {
      if (fields[0] == "v" && fields.size() == 4) {
        vertices.emplace_back(std::stod(fields[1]), std::stod(fields[2]),
                              std::stod(fields[3]));
      } else if (fields[0] == "f" && fields.size() == 4) {
        faces.push_back({std::stoi(fields[1]), std::stoi(fields[2]),
                         std::stoi(fields[3])});
      } else {
        fail("ParseError",
             "unrecognized row at line " + std::to_string(lineNumber));
      }
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      fail("ParseError", "bad number at line " + std::to_string(lineNumber));
    }
  }
  return buildMesh(std::move(vertices), std::move(faces));
}

void writeMeshCsv(std::ostream& out, const SurfaceMesh& mesh) {
  for (const auto& v : mesh.vertices)
    out << "v," << v.x() << ',' << v.y() << ',' << v.z() << '\n';
  for (const auto& f : mesh.faces)
    out << "f," << f[0] << ',' << f[1] << ',' << f[2] << '\n';
}

SurfaceMesh loadMesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("IoError", "cannot open mesh file " + path);
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv")
    return readMeshCsv(in);
  return readObj(in);
}

double cornerAngle(const SurfaceMesh& mesh, int face, int corner) {
  const auto& f = mesh.faces[face];
  const Eigen::Vector3d& a = mesh.vertices[f[corner]];
  const Eigen::Vector3d u = mesh.vertices[f[(corner + 1) % 3]] - a;
  const Eigen::Vector3d v = mesh.vertices[f[(corner + 2) % 3]] - a;
  return std::atan2(u.cross(v).norm(), u.dot(v));
}

double faceArea(const SurfaceMesh& mesh, int face) {
  const auto& f = mesh.faces[face];
  const Eigen::Vector3d u = mesh.vertices[f[1]] - mesh.vertices[f[0]];
  const Eigen::Vector3d v = mesh.vertices[f[2]] - mesh.vertices[f[0]];
  return 0.5 * u.cross(v).norm();
}

GeometryTables computeGeometry(const SurfaceMesh& mesh) {
  GeometryTables g;
  const int nf = mesh.numFaces();
  g.faceArea.resize(nf);
  g.dualArea = Eigen::VectorXd::Zero(mesh.numVertices());
  g.cotanWeight = Eigen::VectorXd::Zero(mesh.numEdges());
  g.cornerAngle.resize(nf);
  for (int f = 0; f < nf; ++f) {
    g.faceArea[f] = faceArea(mesh, f);
    const auto& face = mesh.faces[f];
    for (int c = 0; c < 3; ++c) {
      const double angle = cornerAngle(mesh, f, c);
      g.cornerAngle[f][c] = angle;
      // angle at corner c is opposite the edge between the other two corners
      const int e = mesh.edgeIndex(face[(c + 1) % 3], face[(c + 2) % 3]);
      g.cotanWeight[e] += 0.5 / std::tan(angle);
      g.dualArea[face[c]] += g.faceArea[f] / 3.0;
    }
  }
  g.totalArea = g.faceArea.sum();
  return g;
}

SurfaceMesh makeIcosahedron() {
  const double p = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Eigen::Vector3d> v = {
      {-1, p, 0}, {1, p, 0},   {-1, -p, 0}, {1, -p, 0},
      {0, -1, p}, {0, 1, p},   {0, -1, -p}, {0, 1, -p},
      {p, 0, -1}, {p, 0, 1},   {-p, 0, -1}, {-p, 0, 1},
  };
  for (auto& x : v) x.normalize();
  std::vector<std::array<int, 3>> f = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1},
  };
  return buildMesh(std::move(v), std::move(f));
}

SurfaceMesh makeIcosphere(int subdivisions) {
  SurfaceMesh mesh = makeIcosahedron();
  for (int s = 0; s < subdivisions; ++s) {
    std::vector<Eigen::Vector3d> v = mesh.vertices;
    std::vector<std::array<int, 3>> f;
    std::map<std::int64_t, int> midpoint;
    auto mid = [&](int a, int b) {
      const std::int64_t key = edgeKey(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      const int id = static_cast<int>(v.size());
      v.push_back(((mesh.vertices[a] + mesh.vertices[b]) / 2.0).normalized());
      midpoint.emplace(key, id);
      return id;
    };
    for (const auto& face : mesh.faces) {
      const int ab = mid(face[0], face[1]);
      const int bc = mid(face[1], face[2]);
      const int ca = mid(face[2], face[0]);
      f.push_back({face[0], ab, ca});
      f.push_back({face[1], bc, ab});
      f.push_back({face[2], ca, bc});
      f.push_back({ab, bc, ca});
    }
    mesh = buildMesh(std::move(v), std::move(f));
  }
  return mesh;
}

void rotateMesh(SurfaceMesh& mesh, const Eigen::Vector3d& axis, double angle) {
  const Eigen::AngleAxisd rotation(angle, axis.normalized());
  for (auto& v : mesh.vertices) v = rotation * v;
}

void scaleMesh(SurfaceMesh& mesh, const Eigen::Vector3d& factors) {
  for (auto& v : mesh.vertices) v = v.cwiseProduct(factors);
}

} // namespace zeroflow
