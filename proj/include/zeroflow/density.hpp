#pragma once

#include <vector>

#include <Eigen/Core>

#include "zeroflow/bundle.hpp"
#include "zeroflow/laplace.hpp"
#include "zeroflow/spectral.hpp"

namespace zeroflow {

/// Coordinates of the delta section of a vertex: 1/A_i at i, zero elsewhere,
/// so that <<delta_i, phi>> evaluates phi's coefficient at i.
Eigen::VectorXcd deltaSection(const MassMatrix& mass, int vertex);

/// The pairwise inner products <<S_t delta_a, S_t delta_b>> around a face,
/// computed spectrally as sum_l e^{-2 t lambda_l} (v_l)_a conj((v_l)_b).
/// Swapping a and b conjugates a product. Throws TZero for t <= 0, where the
/// off-diagonal products vanish and their argument is undefined.
struct DeltaProducts {
  Complex ij, jk, ki;
};

DeltaProducts smoothedDeltaProducts(const EigenBasis& basis,
                                    const SurfaceMesh& mesh, int face,
                                    double t);

/// Argument of the cyclic triple product of smoothed-delta inner products,
/// in (-pi, pi]. Well defined for t > 0.
double tripleProductArg(const EigenBasis& basis, const SurfaceMesh& mesh,
                        int face, double t);

/// Continuously unwrapped phase curve of the triple product over a t grid.
///
/// omega[0] is pinned to 2(Omega - pi*l) with l = round(Omega/pi). For t > 0
/// the curve follows the raw argument, choosing at each step the 2*pi branch
/// nearest the previous value and bisecting any step whose jump reaches pi/2
/// (UnwrapAmbiguous when 40 levels of bisection do not settle it). The first
/// positive-t branch is anchored at its own principal value; the phase of the
/// triple product does not extend continuously into the t=0 seed (its small-t
/// limit is arg(w_ij w_jk w_ki) - Omega), so the seed->first-point step is
/// exempt from the jump bound and seedContinuous records whether it happened
/// to be small anyway.
struct OmegaTrack {
  int face = -1;
  int branch = 0;              // l = round(Omega/pi)
  std::vector<double> tGrid;   // ascending, tGrid[0] == 0
  std::vector<double> omega;   // unwrapped values, same length as tGrid
  bool refined = false;        // bisection added grid points
  bool seedContinuous = false; // |omega[1] - omega[0]| < pi/2
};

OmegaTrack omegaTrack(const EigenBasis& basis, const Curvature& curvature,
                      const SurfaceMesh& mesh, int face,
                      const std::vector<double>& tSchedule);

/// Geometric default schedule {0} + {t0 * g^m} with t0 = 0.01/lambda_max and
/// g = 1.25, capped once e^{-t(lambda_2-lambda_1)} < 1e-10 (or at tCap).
std::vector<double> defaultSchedule(const EigenBasis& basis,
                                    double tCap = -1.0);

/// The thesis-style estimator omega(t)/4pi + l/2 read off a track, linearly
/// interpolating omega between grid points. Throws OutOfGrid beyond the grid.
/// Kept as the paper's published formula; the calibrated expected index of a
/// smoothed random section is expectedIndexField below.
double expectedIndex(const OmegaTrack& track, double t);

/// Mean of the principal argument of v*conj(u) for a jointly circular complex
/// Gaussian pair with correlation magnitude k in [0,1] and mean phase theta:
///     k sin(theta) arccos(k cos(theta)) / sqrt(1 - k^2 cos^2(theta)).
double meanPrincipalPhase(double k, double theta);

/// Expected per-face index of a smoothed random section, evaluated exactly.
///
/// A random section smoothed to time t is a circular complex Gaussian whose
/// covariance is (twice) the smoothed-delta product matrix, so each edge's
/// rotation angle has a bivariate-Gaussian principal-phase law with
///     k = |q_ab| / sqrt(q_aa q_bb),   theta = -arg(r_ab q_ab),
/// and the expected index is (Omega + sum of edge means) / 2pi. The edge
/// terms are antisymmetric, so the faces sum to deg(L) to machine precision.
/// At t = 0 with the full basis the off-diagonal products vanish and the
/// value reduces to Omega/2pi.
Eigen::VectorXd expectedIndexField(const EigenBasis& basis,
                                   const Connection& connection,
                                   const Curvature& curvature,
                                   const SurfaceMesh& mesh, double t);

/// expectedIndexField divided by face areas.
Eigen::VectorXd expectedDensityField(const EigenBasis& basis,
                                     const Connection& connection,
                                     const Curvature& curvature,
                                     const SurfaceMesh& mesh,
                                     const GeometryTables& geometry, double t);

} // namespace zeroflow
