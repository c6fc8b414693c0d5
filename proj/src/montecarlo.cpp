#include "zeroflow/montecarlo.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "zeroflow/errors.hpp"

namespace zeroflow {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double uniformOpenClosed(std::uint64_t& state) {
  // (0, 1]: safe under the Box-Muller logarithm
  return 1.0 - static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

} // namespace

Eigen::VectorXcd gaussianCoefficients(std::uint64_t seed,
                                      std::int64_t sampleIndex, int count) {
  // Counter-based stream: the state depends only on (seed, sampleIndex), so
  // sample i is the same no matter which worker draws it.
  std::uint64_t state = seed;
  splitmix64(state);
  state ^= static_cast<std::uint64_t>(sampleIndex) * 0xda942042e4dd58b5ULL;
  splitmix64(state);

  Eigen::VectorXcd z(count);
  for (int l = 0; l < count; ++l) {
    const double u1 = uniformOpenClosed(state);
    const double u2 = uniformOpenClosed(state);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    z[l] = Complex(radius * std::cos(2.0 * kPi * u2),
                   radius * std::sin(2.0 * kPi * u2));
  }
  return z;
}

Eigen::VectorXcd sampleRandomSection(const EigenBasis& basis,
                                     std::uint64_t seed,
                                     std::int64_t sampleIndex, int k) {
  if (k < 1 || k > basis.count())
    fail("kTooLarge", "truncation k = " + std::to_string(k) +
                          " outside 1.." + std::to_string(basis.count()));
  const Eigen::VectorXcd z = gaussianCoefficients(seed, sampleIndex, k);
  return basis.eigenvectors.leftCols(k) * z;
}

SampleStats empiricalIndexStats(const EigenBasis& basis,
                                const Connection& connection,
                                const Curvature& curvature,
                                const SurfaceMesh& mesh, double t,
                                std::int64_t samples, std::uint64_t seed,
                                int k, int workers) {
  if (samples < 1) fail("BadConfig", "need at least one sample");
  if (t < 0.0) fail("NegativeT", "smoothing time must be non-negative");
  if (k < 1 || k > basis.count())
    fail("kTooLarge", "truncation k = " + std::to_string(k) +
                          " outside 1..." + std::to_string(basis.count()));
  workers = std::max(1, workers);

  const int nf = mesh.numFaces();
  const int expectedTotal = degree(curvature);
  const Eigen::VectorXd damping =
      (-t * basis.eigenvalues.head(k).array()).exp();
  const Eigen::MatrixXcd modes = basis.eigenvectors.leftCols(k);

  struct Accumulator {
    std::vector<std::int64_t> sum, sumSq;
    std::int64_t degenerate = 0;
    std::int64_t used = 0;
  };
  std::vector<Accumulator> partial(workers);
  for (auto& acc : partial) {
    acc.sum.assign(nf, 0);
    acc.sumSq.assign(nf, 0);
  }
  std::exception_ptr firstError;
  std::mutex errorMutex;

  auto worker = [&](int w) {
    try {
      Accumulator& acc = partial[w];
      for (std::int64_t s = w; s < samples; s += workers) {
        const Eigen::VectorXcd z = gaussianCoefficients(seed, s, k);
        const Eigen::VectorXcd phi =
            modes * damping.cast<Complex>().cwiseProduct(z);
        Eigen::VectorXi ind;
        try {
          ind = faceIndices(phi, connection, curvature);
        } catch (const Error& e) {
          if (e.code() == "ZeroAtVertex" || e.code() == "AntipodalEdge") {
            ++acc.degenerate;
            continue;
          }
          throw;
        }
        if (ind.sum() != expectedTotal)
          fail("ConservationViolated",
               "sample " + std::to_string(s) + " sums to " +
                   std::to_string(ind.sum()) + ", expected " +
                   std::to_string(expectedTotal));
        for (int f = 0; f < nf; ++f) {
          acc.sum[f] += ind[f];
          acc.sumSq[f] += static_cast<std::int64_t>(ind[f]) * ind[f];
        }
        ++acc.used;
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(errorMutex);
      if (!firstError) firstError = std::current_exception();
    }
  };

  if (workers == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker, w);
    for (auto& thread : pool) thread.join();
  }
  if (firstError) std::rethrow_exception(firstError);

  SampleStats stats;
  stats.sumInd.assign(nf, 0);
  stats.sumIndSquared.assign(nf, 0);
  for (const auto& acc : partial) {
    stats.samples += acc.used;
    stats.degenerate += acc.degenerate;
    for (int f = 0; f < nf; ++f) {
      stats.sumInd[f] += acc.sum[f];
      stats.sumIndSquared[f] += acc.sumSq[f];
    }
  }
  if (stats.degenerate * 100 > samples)
    fail("TooManyDegenerate",
         std::to_string(stats.degenerate) + " degenerate draws out of " +
             std::to_string(samples) + " (> 1%); tolerances look broken");

  const double n = static_cast<double>(stats.samples);
  stats.mean.resize(nf);
  stats.standardError.resize(nf);
  std::int64_t grandTotal = 0;
  for (int f = 0; f < nf; ++f) {
    const double mean = stats.sumInd[f] / n;
    stats.mean[f] = mean;
    const double variance =
        stats.samples > 1
            ? std::max(0.0, (stats.sumIndSquared[f] - n * mean * mean) /
                                (n - 1.0))
            : 0.0;
    stats.standardError[f] = std::sqrt(variance / n);
    grandTotal += stats.sumInd[f];
  }
  stats.meanTotal = grandTotal / n;
  return stats;
}

CompareReport compareReport(const SampleStats& stats,
                            const Eigen::VectorXd& closedForm,
                            double flaggedTolerance) {
  if (closedForm.size() != stats.mean.size())
    fail("ShapeMismatch", "closed form has " +
                              std::to_string(closedForm.size()) +
                              " faces, stats have " +
                              std::to_string(stats.mean.size()));
  CompareReport report;
  report.faces.resize(stats.mean.size());
  int defined = 0, ok = 0;
  for (int f = 0; f < stats.mean.size(); ++f) {
    CompareFace& face = report.faces[f];
    face.mcMean = stats.mean[f];
    face.mcStandardError = stats.standardError[f];
    face.closedForm = closedForm[f];
    if (stats.standardError[f] > 0.0) {
      face.z = (stats.mean[f] - closedForm[f]) / stats.standardError[f];
      face.within3 = std::abs(face.z) < 3.0;
      ++defined;
      if (face.within3) ++ok;
    } else {
      face.flagged = true;
      face.within3 = std::abs(stats.mean[f] - closedForm[f]) <= flaggedTolerance;
      ++report.flaggedCount;
    }
    report.mcTotal += stats.mean[f];
    report.closedFormTotal += closedForm[f];
  }
  report.fractionWithin3 = defined > 0 ? static_cast<double>(ok) / defined : 1.0;
  return report;
}

std::string CompareReport::summary() const {
  std::ostringstream out;
  const int total = static_cast<int>(faces.size());
  int compatible = 0;
  for (const auto& face : faces)
    if (face.within3) ++compatible;
  out << "faces: " << total << ", flagged (zero stderr): " << flaggedCount
      << "\n";
  out << "fraction within 3 stderr (unflagged): " << fractionWithin3 << "\n";
  out << "compatible faces overall: " << compatible << "/" << total << "\n";
  out << "totals: monte carlo " << mcTotal << " vs closed form "
      << closedFormTotal << "\n";
  return out.str();
}

} // namespace zeroflow
