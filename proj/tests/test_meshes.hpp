#pragma once

// Shared fixtures for unit and acceptance tests.

#include <array>
#include <cmath>
#include <map>
#include <vector>

#include "zeroflow/mesh.hpp"

namespace zftest {

/// Icosphere rotated off-axis and stretched along z, so the elongated tips
/// fall strictly inside faces rather than on vertices.
inline zeroflow::SurfaceMesh rotatedEllipsoid(int subdivisions,
                                              double stretch = 2.5) {
  zeroflow::SurfaceMesh mesh = zeroflow::makeIcosphere(subdivisions);
  zeroflow::rotateMesh(mesh, Eigen::Vector3d(1.0, 0.7, 0.3), 0.4);
  zeroflow::scaleMesh(mesh, Eigen::Vector3d(1.0, 1.0, stretch));
  return mesh;
}

/// Cube surface with each square face split into an n x n grid of quads and
/// each quad into two triangles. Grid-interior vertices have flat stars.
inline zeroflow::SurfaceMesh gridCube(int n) {
  std::vector<Eigen::Vector3d> vertices;
  std::map<std::array<int, 3>, int> lookup; // integer lattice keys, scale 2n
  auto vertexAt = [&](int x, int y, int z) {
    const std::array<int, 3> key{x, y, z};
    auto it = lookup.find(key);
    if (it != lookup.end()) return it->second;
    const int id = static_cast<int>(vertices.size());
    vertices.emplace_back(double(x) / n - 1.0, double(y) / n - 1.0,
                          double(z) / n - 1.0);
    lookup.emplace(key, id);
    return id;
  };

  std::vector<std::array<int, 3>> faces;
  // axis = fixed coordinate, sign = which side; (u,v) walk the other two.
  for (int axis = 0; axis < 3; ++axis) {
    for (int sign = 0; sign < 2; ++sign) {
      for (int u = 0; u < n; ++u) {
        for (int v = 0; v < n; ++v) {
          auto corner = [&](int du, int dv) {
            int c[3];
            c[axis] = sign == 0 ? 0 : 2 * n;
            c[(axis + 1) % 3] = 2 * (u + du);
            c[(axis + 2) % 3] = 2 * (v + dv);
            return vertexAt(c[0], c[1], c[2]);
          };
          const int a = corner(0, 0), b = corner(1, 0), c = corner(1, 1),
                    d = corner(0, 1);
          faces.push_back({a, b, c});
          faces.push_back({a, c, d});
        }
      }
    }
  }
  return zeroflow::buildMesh(std::move(vertices), std::move(faces));
}

/// Five-vertex triangular bipyramid; a low apex makes the equator edges
/// carry obtuse opposite angles, hence negative cotan weights.
inline zeroflow::SurfaceMesh bipyramid(double apexHeight) {
  const double r = 1.0 / std::sqrt(3.0); // circumradius of unit-side triangle
  std::vector<Eigen::Vector3d> v;
  for (int i = 0; i < 3; ++i) {
    const double angle = 2.0 * M_PI * i / 3.0;
    v.emplace_back(r * std::cos(angle), r * std::sin(angle), 0.0);
  }
  v.emplace_back(0.0, 0.0, apexHeight);
  v.emplace_back(0.0, 0.0, -apexHeight);
  std::vector<std::array<int, 3>> f = {
      {0, 1, 3}, {1, 2, 3}, {2, 0, 3}, {1, 0, 4}, {2, 1, 4}, {0, 2, 4},
  };
  return zeroflow::buildMesh(std::move(v), std::move(f));
}

/// Regular tetrahedron with unit edge length.
inline zeroflow::SurfaceMesh tetrahedron() {
  const double s = 1.0 / std::sqrt(2.0);
  std::vector<Eigen::Vector3d> v = {
      {1, 0, -s}, {-1, 0, -s}, {0, 1, s}, {0, -1, s}};
  for (auto& p : v) p /= 2.0; // unit edge length
  std::vector<std::array<int, 3>> f = {
      {0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}};
  return zeroflow::buildMesh(std::move(v), std::move(f));
}

} // namespace zftest
