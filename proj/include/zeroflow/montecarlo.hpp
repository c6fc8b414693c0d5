#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "zeroflow/bundle.hpp"
#include "zeroflow/index.hpp"
#include "zeroflow/spectral.hpp"

namespace zeroflow {

/// Per-face statistics over sampled sections. Index sums are accumulated as
/// integers, so merged results are independent of worker count.
struct SampleStats {
  std::int64_t samples = 0;    // non-degenerate samples
  std::int64_t degenerate = 0; // skipped (zero-at-vertex / antipodal draws)
  Eigen::VectorXd mean;        // per-face mean index
  Eigen::VectorXd standardError;
  std::vector<std::int64_t> sumInd;
  std::vector<std::int64_t> sumIndSquared;
  double meanTotal = 0.0; // mean of per-sample total index (= deg(L))
};

/// Deterministic Gaussian coefficients for sample `sampleIndex` of stream
/// `seed`: z_l = x_l + i y_l with x, y standard normal, independent of how
/// samples are partitioned across workers.
Eigen::VectorXcd gaussianCoefficients(std::uint64_t seed,
                                      std::int64_t sampleIndex, int count);

/// Random section phi = sum_l z_l v_l over the first k eigenvectors.
Eigen::VectorXcd sampleRandomSection(const EigenBasis& basis,
                                     std::uint64_t seed,
                                     std::int64_t sampleIndex, int k);

/// Draw N sections, smooth to time t (coefficient damping e^{-t lambda_l}),
/// count per-face indices, and accumulate mean and standard error.
/// Degenerate draws are skipped and counted; TooManyDegenerate above 1%.
SampleStats empiricalIndexStats(const EigenBasis& basis,
                                const Connection& connection,
                                const Curvature& curvature,
                                const SurfaceMesh& mesh, double t,
                                std::int64_t samples, std::uint64_t seed,
                                int k, int workers = 1);

/// Per-face z-scores of the closed form against sampled means.
struct CompareFace {
  double mcMean = 0.0;
  double mcStandardError = 0.0;
  double closedForm = 0.0;
  double z = 0.0;     // undefined when flagged
  bool flagged = false; // zero standard error: z undefined
  bool within3 = false;
};

struct CompareReport {
  std::vector<CompareFace> faces;
  double fractionWithin3 = 0.0; // over unflagged faces
  int flaggedCount = 0;
  double mcTotal = 0.0;
  double closedFormTotal = 0.0;
  std::string summary() const;
};

/// Flagged (zero-stderr) faces count as compatible when the closed form sits
/// within `flaggedTolerance` of the deterministic sample mean.
CompareReport compareReport(const SampleStats& stats,
                            const Eigen::VectorXd& closedForm,
                            double flaggedTolerance = 1e-3);

} // namespace zeroflow
