#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zeroflow/bundle.hpp"
#include "zeroflow/csvio.hpp"
#include "zeroflow/density.hpp"
#include "zeroflow/errors.hpp"
#include "zeroflow/index.hpp"
#include "zeroflow/laplace.hpp"
#include "zeroflow/mesh.hpp"
#include "zeroflow/montecarlo.hpp"
#include "zeroflow/spectral.hpp"

namespace zf = zeroflow;

namespace {

int exitCodeFor(const std::string& code) {
  static const std::vector<std::string> validation = {
      "ParseError",   "NotClosed",   "NonOrientable", "DegenerateFace",
      "BadConfig",    "ShapeMismatch", "NotUnitary",  "HolonomyMismatch",
      "BadEdge",      "kTooLarge"};
  static const std::vector<std::string> io = {"IoError"};
  for (const auto& c : validation)
    if (code == c) return 1;
  for (const auto& c : io)
    if (code == c) return 3;
  return 2; // numerical
}

struct Pipeline {
  zf::SurfaceMesh mesh;
  zf::GeometryTables geometry;
  zf::Connection connection;
  zf::Curvature curvature;
  zf::MassMatrix mass;
  zf::ConnectionLaplacian laplacian;
};

Pipeline buildPipeline(const zf::RunConfig& config) {
  Pipeline p;
  p.mesh = zf::loadMesh(config.mesh);
  p.geometry = zf::computeGeometry(p.mesh);
  if (config.connection == "levi-civita")
    p.connection = zf::leviCivitaConnection(p.mesh, p.geometry);
  else
    p.connection = zf::loadConnection(p.mesh, config.connection.substr(5));
  if (config.curvature == "holonomy")
    p.curvature = zf::curvatureFromHolonomy(p.mesh, p.connection);
  else
    p.curvature = zf::loadCurvature(p.mesh, p.connection,
                                    config.curvature.substr(5));
  p.mass = zf::massMatrix(p.geometry);
  p.laplacian = zf::assembleLaplacian(p.mesh, p.geometry, p.connection);
  return p;
}

zf::EigenBasis solveBasis(const Pipeline& p, int k) {
  if (k == 0) return zf::denseEigenbasis(p.laplacian, p.mass);
  return zf::smallestEigenpairs(p.laplacian, p.mass, k);
}

std::ofstream openOutput(const zf::RunConfig& config,
                         const std::string& name) {
  std::filesystem::create_directories(config.outputDir);
  const auto path = std::filesystem::path(config.outputDir) / name;
  std::ofstream out(path);
  if (!out) zf::fail("IoError", "cannot write " + path.string());
  return out;
}

int runCheck(const std::string& meshPath) {
  const zf::SurfaceMesh mesh = zf::loadMesh(meshPath);
  const zf::GeometryTables geometry = zf::computeGeometry(mesh);

  const double dualSum = geometry.dualArea.sum();
  if (std::abs(dualSum - geometry.totalArea) >
      1e-12 * std::max(1.0, geometry.totalArea))
    zf::fail("GeometryMismatch", "dual areas do not partition the surface");

  const zf::Connection connection =
      zf::leviCivitaConnection(mesh, geometry);
  for (int e = 0; e < mesh.numEdges(); ++e)
    if (std::abs(std::abs(connection.rEdge[e]) - 1.0) > 1e-12)
      zf::fail("NotUnitary", "edge " + std::to_string(e));
  const zf::Curvature curvature = zf::curvatureFromHolonomy(mesh, connection);
  std::cout << "vertices=" << mesh.numVertices()
            << " edges=" << mesh.numEdges() << " faces=" << mesh.numFaces()
            << " area=" << zf::formatDouble(geometry.totalArea) << "\n";
  std::cout << "deg=" << zf::degree(curvature) << std::endl;
  return 0;
}

int runSpectrum(const zf::RunConfig& config) {
  const Pipeline p = buildPipeline(config);
  const zf::EigenBasis basis = solveBasis(p, config.k);
  Eigen::VectorXd residuals(basis.count());
  for (int l = 0; l < basis.count(); ++l)
    residuals[l] = zf::eigenResidual(p.laplacian, p.mass,
                                     basis.eigenvalues[l],
                                     basis.eigenvectors.col(l));
  auto out = openOutput(config, "spectrum.csv");
  zf::writeSpectrumCsv(out, basis, residuals);
  std::cout << "wrote spectrum.csv (" << basis.count() << " pairs)"
            << std::endl;
  return 0;
}

int runDensity(const zf::RunConfig& config) {
  const Pipeline p = buildPipeline(config);
  const zf::EigenBasis basis = solveBasis(p, config.k);
  const std::vector<double> schedule =
      zf::defaultSchedule(basis, config.tCap);

  // Expected-index fields per schedule time.
  std::vector<Eigen::VectorXd> fields;
  fields.reserve(schedule.size());
  for (const double t : schedule)
    fields.push_back(zf::expectedIndexField(basis, p.connection, p.curvature,
                                            p.mesh, t));

  std::vector<zf::DensityRow> rows;
  rows.reserve(schedule.size() * p.mesh.numFaces());
  for (int face = 0; face < p.mesh.numFaces(); ++face) {
    const zf::OmegaTrack track =
        zf::omegaTrack(basis, p.curvature, p.mesh, face, schedule);
    std::size_t cursor = 0;
    for (std::size_t m = 0; m < schedule.size(); ++m) {
      while (track.tGrid[cursor] != schedule[m]) ++cursor;
      rows.push_back({face, schedule[m], track.omega[cursor],
                      fields[m][face],
                      fields[m][face] / p.geometry.faceArea[face]});
    }
  }
  auto out = openOutput(config, "density.csv");
  zf::writeDensityCsv(out, rows);

  std::vector<double> plyTimes = config.tValues;
  if (plyTimes.empty()) plyTimes.push_back(schedule.back());
  for (std::size_t i = 0; i < plyTimes.size(); ++i) {
    const Eigen::VectorXd density = zf::expectedDensityField(
        basis, p.connection, p.curvature, p.mesh, p.geometry, plyTimes[i]);
    auto ply = openOutput(config, "density_t" + std::to_string(i) + ".ply");
    zf::exportPly(ply, p.mesh, density);
  }
  std::cout << "wrote density.csv (" << rows.size() << " rows) and "
            << plyTimes.size() << " ply file(s)" << std::endl;
  return 0;
}

int runMonteCarlo(const zf::RunConfig& config) {
  const Pipeline p = buildPipeline(config);
  const zf::EigenBasis basis = solveBasis(p, config.k);
  std::vector<double> times = config.tValues;
  if (times.empty()) times.push_back(0.0);
  const int k = config.k == 0 ? basis.count() : config.k;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const zf::SampleStats stats = zf::empiricalIndexStats(
        basis, p.connection, p.curvature, p.mesh, times[i], config.mcSamples,
        config.seed, k, config.workers);
    const Eigen::VectorXd closed = zf::expectedIndexField(
        basis, p.connection, p.curvature, p.mesh, times[i]);
    const zf::CompareReport report = zf::compareReport(stats, closed);
    {
      auto out = openOutput(config, "mc_stats_t" + std::to_string(i) + ".csv");
      zf::writeStatsCsv(out, stats);
    }
    {
      auto out =
          openOutput(config, "mc_compare_t" + std::to_string(i) + ".csv");
      zf::writeCompareCsv(out, report);
    }
    std::cout << "t=" << zf::formatDouble(times[i]) << " samples="
              << stats.samples << " degenerate=" << stats.degenerate << "\n"
              << report.summary();
  }
  return 0;
}

int runExportPly(const std::string& csvPath, const std::string& meshPath,
                 const std::string& outPath) {
  const zf::SurfaceMesh mesh = zf::loadMesh(meshPath);
  std::ifstream in(csvPath);
  if (!in) zf::fail("IoError", "cannot open field csv " + csvPath);
  Eigen::VectorXd field = Eigen::VectorXd::Zero(mesh.numFaces());
  Eigen::VectorXi seen = Eigen::VectorXi::Zero(mesh.numFaces());
  std::string line;
  int lineNumber = 0;
  while (std::getline(in, line)) {
    ++lineNumber;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string sf, sv;
    if (!std::getline(ls, sf, ',') || !std::getline(ls, sv, ','))
      zf::fail("ParseError",
               "field row needs face,value at line " + std::to_string(lineNumber));
    if (sf == "face") continue; // header
    int f = 0;
    double v = 0.0;
    try {
      f = std::stoi(sf);
      v = std::stod(sv);
    } catch (const std::exception&) {
      zf::fail("ParseError",
               "bad field number at line " + std::to_string(lineNumber));
    }
    if (f < 0 || f >= mesh.numFaces())
      zf::fail("ShapeMismatch",
               "face id out of range at line " + std::to_string(lineNumber));
    field[f] = v;
    seen[f] = 1;
  }
  if (seen.sum() != mesh.numFaces())
    zf::fail("ShapeMismatch", "field csv does not cover every face");
  std::ofstream out(outPath);
  if (!out) zf::fail("IoError", "cannot write " + outPath);
  zf::exportPly(out, mesh, field);
  std::cout << "wrote " << outPath << std::endl;
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"heat-smoothed random sections of hermitian line bundles on "
               "closed triangle meshes: expected signed-zero densities"};
  app.require_subcommand(0, 1);

  bool dumpConfig = false;
  app.add_flag("--dump-config", dumpConfig,
               "print the default configuration and exit");

  std::string meshPath, configPath, fieldCsv, plyOut;
  std::vector<std::string> overrides;
  int workersFlag = 0;

  auto* check = app.add_subcommand("check", "validate a mesh and its bundle");
  check->add_option("mesh", meshPath, "mesh file (.obj or .csv)")->required();

  auto addConfigOptions = [&](CLI::App* cmd) {
    cmd->add_option("config", configPath, "key=value config file")->required();
    cmd->add_option("--set", overrides, "override config entries (key=value)");
    cmd->add_option("--workers", workersFlag, "worker thread count");
  };
  auto* spectrum =
      app.add_subcommand("spectrum", "write eigenvalue csv");
  addConfigOptions(spectrum);
  auto* density = app.add_subcommand(
      "density", "write closed-form expected index/density over the schedule");
  addConfigOptions(density);
  auto* montecarlo = app.add_subcommand(
      "montecarlo", "sampled index statistics and closed-form comparison");
  addConfigOptions(montecarlo);

  auto* exportPlyCmd =
      app.add_subcommand("export-ply", "colorize a per-face field");
  exportPlyCmd->add_option("field", fieldCsv, "csv with face,value rows")
      ->required();
  exportPlyCmd->add_option("mesh", meshPath, "mesh file")->required();
  exportPlyCmd->add_option("--out", plyOut, "output path (default field.ply)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (dumpConfig) {
      std::cout << zf::RunConfig::defaults().dump();
      return 0;
    }
    if (check->parsed()) return runCheck(meshPath);
    if (spectrum->parsed() || density->parsed() || montecarlo->parsed()) {
      zf::RunConfig config = zf::loadConfig(configPath);
      for (const auto& entry : overrides) {
        const auto eq = entry.find('=');
        if (eq == std::string::npos)
          zf::fail("BadConfig", "override '" + entry + "' is not key=value");
        config.set(entry.substr(0, eq), entry.substr(eq + 1));
      }
      if (workersFlag > 0) config.workers = workersFlag;
      if (config.mesh.empty()) zf::fail("BadConfig", "config needs mesh=");
      if (spectrum->parsed()) return runSpectrum(config);
      if (density->parsed()) return runDensity(config);
      return runMonteCarlo(config);
    }
    if (exportPlyCmd->parsed()) {
      if (plyOut.empty()) plyOut = fieldCsv + ".ply";
      return runExportPly(fieldCsv, meshPath, plyOut);
    }
    std::cout << app.help();
    return 0;
  } catch (const zf::Error& error) {
    std::cerr << "error: " << error.what() << std::endl;
    return exitCodeFor(error.code());
  } catch (const std::exception& error) {
    std::cerr << "error: Internal: " << error.what() << std::endl;
    return 2;
  }
}
