#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "zeroflow/mesh.hpp"

namespace zeroflow {

using Complex = std::complex<double>;

/// Unitary transport coefficient per directed edge, stored once per
/// undirected edge (for the i<j direction); the reverse direction is the
/// complex conjugate, so r_ji = r_ij^{-1} holds exactly.
struct Connection {
  const SurfaceMesh* mesh = nullptr;
  Eigen::VectorXcd rEdge; // aligned with mesh->edges

  Complex transportCoef(int from, int to) const;
};

/// Real curvature angle per face: the face holonomy is e^{i omega}.
struct Curvature {
  Eigen::VectorXd omega;
};

Connection trivialConnection(const SurfaceMesh& mesh);

/// Discrete Levi-Civita transport: each vertex star is flattened by rescaling
/// its corner angles to total 2*pi, edge directions get angular coordinates in
/// that frame, and r_ij = exp(i*(theta_ji + pi - theta_ij)) maps an edge onto
/// itself across the two frames.
Connection leviCivitaConnection(const SurfaceMesh& mesh,
                                const GeometryTables& geometry);

Connection readConnectionCsv(const SurfaceMesh& mesh, std::istream& in);
Connection loadConnection(const SurfaceMesh& mesh, const std::string& path);

/// Holonomy of the oriented face boundary, r_ki * r_jk * r_ij.
Complex faceHolonomy(const Connection& connection, int face);

/// Principal-branch curvature omega = arg(holonomy) in (-pi, pi).
/// Throws BranchBoundary when |omega| is within 1e-6 of pi.
Curvature curvatureFromHolonomy(const SurfaceMesh& mesh,
                                const Connection& connection);

/// External per-face omega; must satisfy the holonomy constraint mod 2*pi.
Curvature readCurvatureCsv(const SurfaceMesh& mesh,
                           const Connection& connection, std::istream& in);
Curvature loadCurvature(const SurfaceMesh& mesh, const Connection& connection,
                        const std::string& path);

/// (1/2pi) * sum of omega over faces, rounded; NotInteger if the pre-rounding
/// value strays from an integer by more than 1e-6.
int degree(const Curvature& curvature);

/// Ordered transport along an edge path (head of each edge = tail of next).
Complex transport(const Connection& connection,
                  const std::vector<std::pair<int, int>>& path, Complex value);

} // namespace zeroflow
