#include "zeroflow/csvio.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "zeroflow/errors.hpp"

namespace zeroflow {

std::string formatDouble(double value) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

void writeSpectrumCsv(std::ostream& out, const EigenBasis& basis,
                      const Eigen::VectorXd& residuals) {
  out << "l,lambda,residual\n";
  for (int l = 0; l < basis.count(); ++l)
    out << (l + 1) << ',' << formatDouble(basis.eigenvalues[l]) << ','
        << formatDouble(residuals[l]) << '\n';
}

void writeDensityCsv(std::ostream& out, const std::vector<DensityRow>& rows) {
  out << "face,t,omega,I,P\n";
  for (const auto& row : rows)
    out << row.face << ',' << formatDouble(row.t) << ','
        << formatDouble(row.omega) << ',' << formatDouble(row.I) << ','
        << formatDouble(row.P) << '\n';
}

void writeStatsCsv(std::ostream& out, const SampleStats& stats) {
  out << "face,samples,mean,stderr\n";
  for (int f = 0; f < stats.mean.size(); ++f)
    out << f << ',' << stats.samples << ',' << formatDouble(stats.mean[f])
        << ',' << formatDouble(stats.standardError[f]) << '\n';
}

void writeCompareCsv(std::ostream& out, const CompareReport& report) {
  out << "face,mc_mean,mc_stderr,closed_form,z,status\n";
  for (std::size_t f = 0; f < report.faces.size(); ++f) {
    const auto& face = report.faces[f];
    out << f << ',' << formatDouble(face.mcMean) << ','
        << formatDouble(face.mcStandardError) << ','
        << formatDouble(face.closedForm) << ',';
    if (face.flagged)
      out << "nan,flagged";
    else
      out << formatDouble(face.z) << ',' << (face.within3 ? "ok" : "off");
    out << '\n';
  }
}

std::array<unsigned char, 3> rainbowColor(double unit) {
  unit = std::min(std::max(unit, 0.0), 1.0);
  // hue 240 (blue) down to 0 (red), full saturation and value
  const double hue = (1.0 - unit) * 240.0 / 60.0;
  const int sector = static_cast<int>(std::floor(hue)) % 6;
  const double f = hue - std::floor(hue);
  const auto channel = [](double x) {
    return static_cast<unsigned char>(std::lround(255.0 * x));
  };
  switch (sector) {
    case 0: return {255, channel(f), 0};
    case 1: return {channel(1.0 - f), 255, 0};
    case 2: return {0, 255, channel(f)};
    case 3: return {0, channel(1.0 - f), 255};
    default: return {0, 0, 255};
  }
}

void exportPly(std::ostream& out, const SurfaceMesh& mesh,
               const Eigen::VectorXd& faceField) {
  if (faceField.size() != mesh.numFaces())
    fail("ShapeMismatch", "field has " + std::to_string(faceField.size()) +
                              " entries for " +
                              std::to_string(mesh.numFaces()) + " faces");
  const double lo = faceField.minCoeff();
  const double hi = faceField.maxCoeff();
  const bool constant = hi - lo < 1e-15;

  out << "ply\nformat ascii 1.0\n";
  out << "element vertex " << mesh.numVertices() << "\n";
  out << "property double x\nproperty double y\nproperty double z\n";
  out << "element face " << mesh.numFaces() << "\n";
  out << "property list uchar int vertex_indices\n";
  out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  out << "end_header\n";
  for (const auto& v : mesh.vertices)
    out << formatDouble(v.x()) << ' ' << formatDouble(v.y()) << ' '
        << formatDouble(v.z()) << '\n';
  for (int f = 0; f < mesh.numFaces(); ++f) {
    const double unit = constant ? 0.5 : (faceField[f] - lo) / (hi - lo);
    const auto rgb = rainbowColor(unit);
    const auto& face = mesh.faces[f];
    out << "3 " << face[0] << ' ' << face[1] << ' ' << face[2] << ' '
        << static_cast<int>(rgb[0]) << ' ' << static_cast<int>(rgb[1]) << ' '
        << static_cast<int>(rgb[2]) << '\n';
  }
}

void RunConfig::set(const std::string& key, const std::string& value) {
  try {
    if (key == "mesh") {
      mesh = value;
    } else if (key == "connection") {
      if (value != "levi-civita" && value.rfind("file:", 0) != 0)
        fail("BadConfig", "connection must be levi-civita or file:<path>");
      connection = value;
    } else if (key == "curvature") {
      if (value != "holonomy" && value.rfind("file:", 0) != 0)
        fail("BadConfig", "curvature must be holonomy or file:<path>");
      curvature = value;
    } else if (key == "k") {
      k = std::stoi(value);
      if (k < 0) fail("BadConfig", "k must be >= 0 (0 = full basis)");
    } else if (key == "t_cap") {
      tCap = std::stod(value);
    } else if (key == "t_values") {
      tValues.clear();
      std::istringstream ls(value);
      std::string item;
      while (std::getline(ls, item, ';')) {
        if (!item.empty()) tValues.push_back(std::stod(item));
      }
    } else if (key == "mc_samples") {
      mcSamples = std::stoll(value);
      if (mcSamples < 1) fail("BadConfig", "mc_samples must be >= 1");
    } else if (key == "seed") {
      seed = std::stoull(value);
    } else if (key == "workers") {
      workers = std::stoi(value);
      if (workers < 1) fail("BadConfig", "workers must be >= 1");
    } else if (key == "output_dir") {
      outputDir = value;
    } else {
      fail("BadConfig", "unknown key '" + key + "'");
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    fail("BadConfig", "bad value '" + value + "' for key '" + key + "'");
  }
}

std::string RunConfig::dump() const {
  std::ostringstream out;
  out << "mesh=" << mesh << '\n';
  out << "connection=" << connection << '\n';
  out << "curvature=" << curvature << '\n';
  out << "k=" << k << '\n';
  out << "t_cap=" << formatDouble(tCap) << '\n';
  out << "t_values=";
  for (std::size_t i = 0; i < tValues.size(); ++i)
    out << (i ? ";" : "") << formatDouble(tValues[i]);
  out << '\n';
  out << "mc_samples=" << mcSamples << '\n';
  out << "seed=" << seed << '\n';
  out << "workers=" << workers << '\n';
  out << "output_dir=" << outputDir << '\n';
  return out.str();
}

RunConfig readConfig(std::istream& in) {
  RunConfig config;
  std::string line;
  int lineNumber = 0;
  while (std::getline(in, line)) {
    ++lineNumber;
    const auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail("BadConfig",
           "expected key=value at line " + std::to_string(lineNumber));
    const std::string key = line.substr(start, eq - start);
    config.set(key, line.substr(eq + 1));
  }
  return config;
}

RunConfig loadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("IoError", "cannot open config file " + path);
  return readConfig(in);
}

} // namespace zeroflow
