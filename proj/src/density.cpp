#include "zeroflow/density.hpp"

#include <cmath>
#include <numbers>

#include "zeroflow/errors.hpp"

namespace zeroflow {

namespace {

constexpr double kPi = std::numbers::pi;

// sum_l e^{-2 t (lambda_l - lambda_1)} (v_l)_a conj((v_l)_b): the smoothed
// delta product scaled by e^{+2 t lambda_1}. The common positive factor keeps
// every downstream ratio and argument unchanged and never underflows.
Complex scaledProduct(const EigenBasis& basis, const Eigen::VectorXd& weights,
                      int a, int b) {
  Complex sum = 0.0;
  for (int l = 0; l < basis.count(); ++l)
    sum += weights[l] * basis.eigenvectors(a, l) *
           std::conj(basis.eigenvectors(b, l));
  return sum;
}

Eigen::VectorXd relativeWeights(const EigenBasis& basis, double t) {
  const double lambda1 = basis.eigenvalues[0];
  return (-2.0 * t * (basis.eigenvalues.array() - lambda1)).exp();
}

double principalDiff(double value, double reference) {
  // representative of `value` mod 2*pi nearest to `reference`
  return value + 2.0 * kPi * std::round((reference - value) / (2.0 * kPi));
}

} // namespace

Eigen::VectorXcd deltaSection(const MassMatrix& mass, int vertex) {
  Eigen::VectorXcd delta = Eigen::VectorXcd::Zero(mass.size());
  delta[vertex] = Complex(1.0 / mass.diag[vertex], 0.0);
  return delta;
}

DeltaProducts smoothedDeltaProducts(const EigenBasis& basis,
                                    const SurfaceMesh& mesh, int face,
                                    double t) {
  if (!(t > 0.0))
    fail("TZero", "off-diagonal delta products vanish at t = 0; their "
                  "argument is undefined");
  const auto& f = mesh.faces[face];
  const Eigen::VectorXd weights =
      (-2.0 * t * basis.eigenvalues.array()).exp();
  DeltaProducts q;
  q.ij = scaledProduct(basis, weights, f[0], f[1]);
  q.jk = scaledProduct(basis, weights, f[1], f[2]);
  q.ki = scaledProduct(basis, weights, f[2], f[0]);
  return q;
}

double tripleProductArg(const EigenBasis& basis, const SurfaceMesh& mesh,
                        int face, double t) {
  if (!(t > 0.0)) fail("TZero", "triple product argument needs t > 0");
  const auto& f = mesh.faces[face];
  const Eigen::VectorXd weights = relativeWeights(basis, t);
  const Complex product = scaledProduct(basis, weights, f[0], f[1]) *
                          scaledProduct(basis, weights, f[1], f[2]) *
                          scaledProduct(basis, weights, f[2], f[0]);
  return std::arg(product);
}

std::vector<double> defaultSchedule(const EigenBasis& basis, double tCap) {
  const double lambdaMax = basis.eigenvalues[basis.count() - 1];
  if (!(lambdaMax > 0.0))
    fail("BadSchedule", "largest eigenvalue must be positive");
  double cap = tCap;
  if (cap <= 0.0) {
    // decay rate toward the lambda_1 eigenspace: first eigenvalue above the
    // ground cluster (lambda_1 may be degenerate)
    const double lambda1 = basis.eigenvalues[0];
    double gap = 0.0;
    for (int l = 1; l < basis.count(); ++l) {
      if (basis.eigenvalues[l] > lambda1 * (1.0 + 1e-8) + 1e-14) {
        gap = basis.eigenvalues[l] - lambda1;
        break;
      }
    }
    if (gap > 1e-14)
      cap = -std::log(1e-10) / gap;
    else
      fail("BadSchedule",
           "spectral gap too small to derive a cap; pass tCap explicitly");
  }
  std::vector<double> schedule{0.0};
  const double growth = 1.25;
  for (double t = 0.01 / lambdaMax; t < cap; t *= growth)
    schedule.push_back(t);
  schedule.push_back(cap);
  return schedule;
}

OmegaTrack omegaTrack(const EigenBasis& basis, const Curvature& curvature,
                      const SurfaceMesh& mesh, int face,
                      const std::vector<double>& tSchedule) {
  if (tSchedule.size() < 2 || tSchedule[0] != 0.0)
    fail("TZero", "schedule must start at t = 0 and contain a t > 0 point");
  for (std::size_t m = 1; m < tSchedule.size(); ++m)
    if (!(tSchedule[m] > tSchedule[m - 1]))
      fail("BadSchedule", "schedule must be strictly ascending");

  const double omegaFace = curvature.omega[face];
  OmegaTrack track;
  track.face = face;
  // std::round ties away from zero; a tie needs Omega = +-pi mod 2*pi, which
  // only external curvature input can produce.
  track.branch = static_cast<int>(std::round(omegaFace / kPi));
  track.tGrid.push_back(0.0);
  track.omega.push_back(2.0 * (omegaFace - kPi * track.branch));

  // First positive-t point anchors its own principal branch.
  double prevT = tSchedule[1];
  double prev = tripleProductArg(basis, mesh, face, prevT);
  track.tGrid.push_back(prevT);
  track.omega.push_back(prev);
  track.seedContinuous = std::abs(prev - track.omega[0]) < kPi / 2.0;

  for (std::size_t m = 2; m < tSchedule.size(); ++m) {
    // Walk to the next scheduled point, bisecting while the phase moves by
    // pi/2 or more per step. A genuine discontinuity (a delta product
    // crossing zero) keeps failing at ever smaller steps; the depth cap and
    // the step floor turn that into UnwrapAmbiguous instead of a creep.
    struct Segment {
      double t;
      int depth;
    };
    std::vector<Segment> stack{{tSchedule[m], 0}};
    while (!stack.empty()) {
      const Segment seg = stack.back();
      const double raw = tripleProductArg(basis, mesh, face, seg.t);
      const double unwrapped = principalDiff(raw, prev);
      if (std::abs(unwrapped - prev) >= kPi / 2.0) {
        const double mid = 0.5 * (prevT + seg.t);
        if (seg.depth >= 40 || !(mid > prevT) || !(mid < seg.t) ||
            seg.t - prevT < 1e-12 * (1.0 + seg.t))
          fail("UnwrapAmbiguous",
               "face " + std::to_string(face) +
                   ": phase moves too fast near t = " + std::to_string(seg.t));
        stack.push_back({mid, seg.depth + 1});
        track.refined = true;
        continue;
      }
      stack.pop_back();
      track.tGrid.push_back(seg.t);
      track.omega.push_back(unwrapped);
      prevT = seg.t;
      prev = unwrapped;
    }
  }
  return track;
}

double expectedIndex(const OmegaTrack& track, double t) {
  if (t < track.tGrid.front() || t > track.tGrid.back())
    fail("OutOfGrid", "t = " + std::to_string(t) + " outside track grid [" +
                          std::to_string(track.tGrid.front()) + ", " +
                          std::to_string(track.tGrid.back()) + "]");
  const auto upper =
      std::lower_bound(track.tGrid.begin(), track.tGrid.end(), t);
  double omega;
  if (upper == track.tGrid.begin()) {
    omega = track.omega.front();
  } else if (*upper == t) {
    omega = track.omega[upper - track.tGrid.begin()];
  } else {
    const auto hi = upper - track.tGrid.begin();
    const auto lo = hi - 1;
    const double s =
        (t - track.tGrid[lo]) / (track.tGrid[hi] - track.tGrid[lo]);
    omega = (1.0 - s) * track.omega[lo] + s * track.omega[hi];
  }
  return omega / (4.0 * kPi) + track.branch / 2.0;
}

double meanPrincipalPhase(double k, double theta) {
  k = std::min(std::max(k, 0.0), 1.0 - 1e-15);
  const double c = std::cos(theta);
  return k * std::sin(theta) * std::acos(k * c) / std::sqrt(1.0 - k * k * c * c);
}

Eigen::VectorXd expectedIndexField(const EigenBasis& basis,
                                   const Connection& connection,
                                   const Curvature& curvature,
                                   const SurfaceMesh& mesh, double t) {
  if (t < 0.0) fail("NegativeT", "smoothing time must be non-negative");
  const int n = basis.dimension();
  const Eigen::VectorXd weights = relativeWeights(basis, t);

  // Self products q_aa (scaled like the off-diagonal ones).
  Eigen::VectorXd qDiag(n);
  for (int a = 0; a < n; ++a) {
    double sum = 0.0;
    for (int l = 0; l < basis.count(); ++l)
      sum += weights[l] * std::norm(basis.eigenvectors(a, l));
    qDiag[a] = sum;
  }

  // One mean edge phase per undirected edge; both orientations negate.
  Eigen::VectorXd edgeMean(mesh.numEdges());
  for (int e = 0; e < mesh.numEdges(); ++e) {
    const int a = mesh.edges[e][0], b = mesh.edges[e][1];
    const Complex q = scaledProduct(basis, weights, a, b);
    const double k = std::abs(q) / std::sqrt(qDiag[a] * qDiag[b]);
    const double theta = -std::arg(q * connection.rEdge[e]);
    edgeMean[e] = meanPrincipalPhase(k, theta);
  }

  Eigen::VectorXd field(mesh.numFaces());
  for (int face = 0; face < mesh.numFaces(); ++face) {
    const auto& f = mesh.faces[face];
    double sum = curvature.omega[face];
    for (int c = 0; c < 3; ++c) {
      const int a = f[c], b = f[(c + 1) % 3];
      const int e = mesh.edgeIndex(a, b);
      sum += mesh.edges[e][0] == a ? edgeMean[e] : -edgeMean[e];
    }
    field[face] = sum / (2.0 * kPi);
  }
  return field;
}

Eigen::VectorXd expectedDensityField(const EigenBasis& basis,
                                     const Connection& connection,
                                     const Curvature& curvature,
                                     const SurfaceMesh& mesh,
                                     const GeometryTables& geometry,
                                     double t) {
  return expectedIndexField(basis, connection, curvature, mesh, t)
      .cwiseQuotient(geometry.faceArea);
}

} // namespace zeroflow
