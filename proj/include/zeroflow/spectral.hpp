#pragma once

#include <Eigen/Core>

#include "zeroflow/laplace.hpp"

namespace zeroflow {

/// Mass-orthonormal generalized eigenpairs of (L, M), eigenvalues ascending.
struct EigenBasis {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXcd eigenvectors; // columns; v_a^* M v_b = delta_ab

  int count() const { return static_cast<int>(eigenvalues.size()); }
  int dimension() const { return static_cast<int>(eigenvectors.rows()); }
};

/// k smallest eigenpairs by shift-inverted power iteration with M-orthogonal
/// deflation. Throws kTooLarge / NoConvergence.
EigenBasis smallestEigenpairs(const ConnectionLaplacian& laplacian,
                              const MassMatrix& mass, int k,
                              double tol = 1e-9, int maxIterations = 10000);

/// Full spectrum through the symmetric reduction M^{-1/2} L M^{-1/2};
/// validation oracle for small systems. Throws TooLarge above maxSize.
EigenBasis denseEigenbasis(const ConnectionLaplacian& laplacian,
                           const MassMatrix& mass, int maxSize = 2048);

/// Relative eigenpair residual ||L v - lambda M v|| / ||v||.
double eigenResidual(const ConnectionLaplacian& laplacian,
                     const MassMatrix& mass, double lambda,
                     const Eigen::VectorXcd& v);

/// Spectral heat smoothing: sum_l e^{-t lambda_l} <<v_l, phi>> v_l.
/// With the full basis and t = 0 this is the identity. Throws NegativeT.
Eigen::VectorXcd smoothSection(const EigenBasis& basis, const MassMatrix& mass,
                               const Eigen::VectorXcd& phi, double t);

/// Dense matrix-exponential oracle for e^{-t M^{-1} L} phi. Evaluates both a
/// scaling-and-squaring path and a scaled truncated power series and insists
/// they agree to 1e-9 relative. Throws TooLarge above maxSize.
Eigen::VectorXcd expmApplyOracle(const ConnectionLaplacian& laplacian,
                                 const MassMatrix& mass,
                                 const Eigen::VectorXcd& phi, double t,
                                 int maxSize = 256);

/// Fubini-Study distance arccos(|<<phi,psi>>| / (||phi|| ||psi||)) with the
/// mass-weighted product; range [0, pi/2]. Throws ZeroSection.
double projectiveDistance(const Eigen::VectorXcd& phi,
                          const Eigen::VectorXcd& psi, const MassMatrix& mass);

} // namespace zeroflow
