#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

namespace zeroflow {

/// Closed oriented triangle mesh. Faces are counterclockwise with respect to
/// the outward orientation; every undirected edge has exactly two incident
/// faces, traversing it in opposite directions.
struct SurfaceMesh {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 3>> faces;

  // Derived connectivity, filled by buildMesh.
  std::vector<std::array<int, 2>> edges;     // undirected, stored with i < j
  std::vector<std::array<int, 2>> edgeFaces; // the two incident faces per edge
  std::unordered_map<std::int64_t, int> edgeIndexMap;

  int numVertices() const { return static_cast<int>(vertices.size()); }
  int numFaces() const { return static_cast<int>(faces.size()); }
  int numEdges() const { return static_cast<int>(edges.size()); }

  int edgeIndex(int a, int b) const;

  /// Axis-aligned bounding box diagonal, used for scale-relative tolerances.
  double boundingBoxDiagonal() const;
};

/// Validates connectivity (closedness, orientability, index sanity), repairs
/// face windings to a consistent orientation, and derives the edge tables.
/// Throws NotClosed / NonOrientable / DegenerateFace / ParseError.
SurfaceMesh buildMesh(std::vector<Eigen::Vector3d> vertices,
                      std::vector<std::array<int, 3>> faces);

SurfaceMesh loadMesh(const std::string& path);
SurfaceMesh readObj(std::istream& in);
SurfaceMesh readMeshCsv(std::istream& in);
void writeMeshCsv(std::ostream& out, const SurfaceMesh& mesh);

/// Per-face and per-vertex scalar geometry consumed by the operators.
struct GeometryTables {
  Eigen::VectorXd faceArea;                      // per face
  Eigen::VectorXd dualArea;                      // per vertex, barycentric
  Eigen::VectorXd cotanWeight;                   // per undirected edge
  std::vector<std::array<double, 3>> cornerAngle; // per face corner
  double totalArea = 0.0;
};

GeometryTables computeGeometry(const SurfaceMesh& mesh);

/// Interior angle at the given corner of a face, in (0, pi).
double cornerAngle(const SurfaceMesh& mesh, int face, int corner);
double faceArea(const SurfaceMesh& mesh, int face);

// Test-scale generators.
SurfaceMesh makeIcosahedron();
SurfaceMesh makeIcosphere(int subdivisions);
void rotateMesh(SurfaceMesh& mesh, const Eigen::Vector3d& axis, double angle);
void scaleMesh(SurfaceMesh& mesh, const Eigen::Vector3d& factors);

} // namespace zeroflow
