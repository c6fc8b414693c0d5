#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "zeroflow/mesh.hpp"
#include "zeroflow/montecarlo.hpp"
#include "zeroflow/spectral.hpp"

namespace zeroflow {

/// Shortest decimal representation that round-trips to the same double.
std::string formatDouble(double value);

void writeSpectrumCsv(std::ostream& out, const EigenBasis& basis,
                      const Eigen::VectorXd& residuals);

/// Rows face,t,omega,I,P: omega from the phase track, I and P from the
/// expected-index field.
struct DensityRow {
  int face;
  double t, omega, I, P;
};
void writeDensityCsv(std::ostream& out, const std::vector<DensityRow>& rows);

void writeStatsCsv(std::ostream& out, const SampleStats& stats);
void writeCompareCsv(std::ostream& out, const CompareReport& report);

/// ASCII PLY with one uchar RGB per face, min -> blue, max -> red through a
/// rainbow gradient; constant fields (range < 1e-15) map to the midpoint.
void exportPly(std::ostream& out, const SurfaceMesh& mesh,
               const Eigen::VectorXd& faceField);
std::array<unsigned char, 3> rainbowColor(double unit);

/// Flat key=value run configuration with flag-style overrides.
struct RunConfig {
  std::string mesh;
  std::string connection = "levi-civita"; // or file:<path>
  std::string curvature = "holonomy";     // or file:<path>
  int k = 0;                              // eigenpair count; 0 = full basis
  double tCap = -1.0;                     // schedule cap; <0 = spectral-gap rule
  std::vector<double> tValues;            // explicit evaluation times
  std::int64_t mcSamples = 10000;
  std::uint64_t seed = 1;
  int workers = 1;
  std::string outputDir = ".";

  static RunConfig defaults() { return RunConfig{}; }
  void set(const std::string& key, const std::string& value);
  std::string dump() const;
};

RunConfig readConfig(std::istream& in);
RunConfig loadConfig(const std::string& path);

} // namespace zeroflow
