#include "zeroflow/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <unsupported/Eigen/MatrixFunctions>

#include "zeroflow/errors.hpp"

namespace zeroflow {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic start vector for the power iteration.
Eigen::VectorXcd seededVector(int n, std::uint64_t seed) {
  Eigen::VectorXcd v(n);
  std::uint64_t state = seed * 0x2545f4914f6cdd1dULL + 0x1234567887654321ULL;
  for (int i = 0; i < n; ++i) {
    const double re = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
    const double im = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
    v[i] = Complex(2.0 * re - 1.0, 2.0 * im - 1.0);
  }
  return v;
}

} // namespace

double eigenResidual(const ConnectionLaplacian& laplacian,
                     const MassMatrix& mass, double lambda,
                     const Eigen::VectorXcd& v) {
  const Eigen::VectorXcd r =
      laplacian.matrix * v - lambda * mass.diag.asDiagonal() * v;
  return r.norm() / v.norm();
}

EigenBasis smallestEigenpairs(const ConnectionLaplacian& laplacian,
                              const MassMatrix& mass, int k, double tol,
                              int maxIterations) {
  const int n = laplacian.size();
  if (k < 1 || k > n)
    fail("kTooLarge", "requested " + std::to_string(k) + " pairs of " +
                          std::to_string(n));

  // Tiny relative shift keeps the factorization usable when the holonomy is
  // trivial and L has an exact kernel; Rayleigh quotients still use L itself.
  const double meanDiag =
      laplacian.matrix.diagonal().real().sum() / std::max(n, 1);
  const double shift = 1e-12 * meanDiag;
  Eigen::SparseMatrix<Complex> shifted = laplacian.matrix;
  for (int i = 0; i < n; ++i)
    shifted.coeffRef(i, i) += Complex(shift * mass.diag[i], 0.0);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<Complex>, Eigen::Lower> solver;
  solver.compute(shifted);
  if (solver.info() != Eigen::Success)
    fail("NoConvergence", "sparse factorization of the Laplacian failed");

  const auto mDot = [&](const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    return a.dot(mass.diag.asDiagonal() * b);
  };

  // Inverted block subspace iteration with Rayleigh-Ritz extraction: guard
  // vectors keep clustered eigenvalues from stalling the contraction.
  const int block = std::min(n, k + std::min(4, n - k));
  Eigen::MatrixXcd basisBlock(n, block);
  for (int c = 0; c < block; ++c)
    basisBlock.col(c) = seededVector(n, 0x5eedULL + c);

  const auto orthonormalize = [&](Eigen::MatrixXcd& x) {
    for (int c = 0; c < x.cols(); ++c) {
      for (int pass = 0; pass < 2; ++pass)
        for (int p = 0; p < c; ++p)
          x.col(c) -= mDot(x.col(p), x.col(c)) * x.col(p);
      const double norm = std::sqrt(mDot(x.col(c), x.col(c)).real());
      if (!(norm > 0.0)) fail("NoConvergence", "block collapsed to zero");
      x.col(c) /= norm;
    }
  };

  Eigen::VectorXd values(block);
  bool converged = false;
  for (int iter = 0; iter < maxIterations && !converged; ++iter) {
    for (int c = 0; c < block; ++c) {
      const Eigen::VectorXcd rhs = mass.diag.asDiagonal() * basisBlock.col(c);
      basisBlock.col(c) = solver.solve(rhs);
    }
    orthonormalize(basisBlock);
    // Rayleigh-Ritz on the current subspace.
    const Eigen::MatrixXcd interaction =
        basisBlock.adjoint() * (laplacian.matrix * basisBlock);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ritz(
        (interaction + interaction.adjoint()) / 2.0);
    basisBlock = basisBlock * ritz.eigenvectors();
    values = ritz.eigenvalues();

    converged = true;
    for (int c = 0; c < k; ++c)
      if (eigenResidual(laplacian, mass, values[c], basisBlock.col(c)) >= tol)
        converged = false;
  }
  if (!converged)
    fail("NoConvergence", "block iteration did not reach tolerance " +
                              std::to_string(tol) + " within " +
                              std::to_string(maxIterations) + " sweeps");

  EigenBasis basis;
  basis.eigenvalues = values.head(k);
  basis.eigenvectors = basisBlock.leftCols(k);
  return basis;
}

EigenBasis denseEigenbasis(const ConnectionLaplacian& laplacian,
                           const MassMatrix& mass, int maxSize) {
  const int n = laplacian.size();
  if (n > maxSize)
    fail("TooLarge", "dense eigenbasis limited to n <= " +
                         std::to_string(maxSize) + ", got " +
                         std::to_string(n));
  const Eigen::VectorXd invSqrt = mass.diag.cwiseSqrt().cwiseInverse();
  Eigen::MatrixXcd b = Eigen::MatrixXcd(laplacian.matrix);
  b = invSqrt.asDiagonal() * b * invSqrt.asDiagonal();
  // Symmetrize away assembly round-off before the solve.
  b = (b + b.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(b);
  if (solver.info() != Eigen::Success)
    fail("NoConvergence", "dense Hermitian eigensolve failed");
  EigenBasis basis;
  basis.eigenvalues = solver.eigenvalues();
  basis.eigenvectors = invSqrt.asDiagonal() * solver.eigenvectors();
  return basis;
}

Eigen::VectorXcd smoothSection(const EigenBasis& basis, const MassMatrix& mass,
                               const Eigen::VectorXcd& phi, double t) {
  if (t < 0.0) fail("NegativeT", "smoothing time must be non-negative");
  if (phi.size() != basis.dimension())
    fail("ShapeMismatch", "section length does not match the basis");
  const Eigen::VectorXcd coeffs =
      basis.eigenvectors.adjoint() * (mass.diag.asDiagonal() * phi);
  const Eigen::VectorXd damping = (-t * basis.eigenvalues.array()).exp();
  return basis.eigenvectors * (damping.cast<Complex>().asDiagonal() * coeffs);
}

Eigen::VectorXcd expmApplyOracle(const ConnectionLaplacian& laplacian,
                                 const MassMatrix& mass,
                                 const Eigen::VectorXcd& phi, double t,
                                 int maxSize) {
  const int n = laplacian.size();
  if (n > maxSize)
    fail("TooLarge", "exponential oracle limited to n <= " +
                         std::to_string(maxSize) + ", got " +
                         std::to_string(n));
  if (t < 0.0) fail("NegativeT", "smoothing time must be non-negative");
  const Eigen::MatrixXcd a =
      mass.diag.cwiseInverse().asDiagonal() * Eigen::MatrixXcd(laplacian.matrix);

  // Path 1: scaling-and-squaring matrix exponential.
  const Eigen::MatrixXcd expMat = (-t * a).exp();
  const Eigen::VectorXcd viaMatrix = expMat * phi;

  // Path 2: power series applied to the vector, with the time step scaled
  // down until the series is well conditioned.
  const double opScale = t * a.cwiseAbs().rowwise().sum().maxCoeff();
  int doublings = 0;
  while (opScale / std::pow(2.0, doublings) > 0.5 && doublings < 60)
    ++doublings;
  const double h = t / std::pow(2.0, doublings);
  Eigen::VectorXcd viaSeries = phi;
  const std::int64_t steps = std::int64_t(1) << doublings;
  for (std::int64_t step = 0; step < steps; ++step) {
    Eigen::VectorXcd term = viaSeries;
    Eigen::VectorXcd sum = viaSeries;
    for (int j = 1; j <= 60; ++j) {
      term = (a * term) * (-h / j);
      sum += term;
      if (term.norm() <= 1e-18 * sum.norm()) break;
    }
    viaSeries = sum;
  }

  const double scale = std::max(viaMatrix.norm(), 1e-300);
  if ((viaMatrix - viaSeries).norm() / scale > 1e-9)
    fail("OracleMismatch",
         "matrix-exponential paths disagree beyond 1e-9 relative");
  return viaMatrix;
}

double projectiveDistance(const Eigen::VectorXcd& phi,
                          const Eigen::VectorXcd& psi,
                          const MassMatrix& mass) {
  const double normPhi = std::sqrt(phi.dot(mass.diag.asDiagonal() * phi).real());
  const double normPsi = std::sqrt(psi.dot(mass.diag.asDiagonal() * psi).real());
  if (!(normPhi > 0.0) || !(normPsi > 0.0))
    fail("ZeroSection", "projective distance needs non-zero sections");
  const double overlap = std::abs(phi.dot(mass.diag.asDiagonal() * psi));
  return std::acos(std::min(overlap / (normPhi * normPsi), 1.0));
}

} // namespace zeroflow
