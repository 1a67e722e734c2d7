#pragma once

// Dense complex linear algebra used throughout: singular value decomposition
// in the A = V * diag(sigma) * U convention (U itself unitary, not U^*),
// operator norm, numerical rank, and the isometric subspace {z : |Az| = |z|}.

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "focklab/errors.hpp"

namespace focklab {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

/// |sigma - 1| <= kSigmaOneTol counts as a unit singular value. Classification
/// at the ||A|| = 1 boundary is discontinuous in exact arithmetic, so every
/// verdict records the tolerance it was decided with.
constexpr double kSigmaOneTol = 1e-9;
constexpr double kSubspaceTol = 1e-9;
constexpr double kProjectorTol = 1e-8;
constexpr double kEquivTol = 1e-8;

/// A = V * diag(sigma) * U with V, U unitary, sigma nonincreasing >= 0.
struct SvdFactors {
    CMatrix V;
    RVector sigma;
    CMatrix U;

    CMatrix reconstruct() const { return V * sigma.asDiagonal() * U; }
};

/// Singular value decomposition; sigma is uniquely determined, (V, U) is not.
SvdFactors svd(const CMatrix& A);

/// Spectral norm = max singular value.
double operator_norm(const CMatrix& A);

/// Number of singular values > tol.
int rank_with_tol(const CMatrix& A, double tol = kSigmaOneTol);

/// Orthonormal basis (columns) of {z : |Az| = |z|} = ker(I - A^*A), valid for
/// ||A|| <= 1. Returns an n x 0 matrix when ||A|| < 1.
/// Throws DomainError when ||A|| > 1 + tol.
CMatrix fixed_subspace(const CMatrix& A, double tol = kSigmaOneTol);

/// Same, reusing an existing factorization of A.
CMatrix fixed_subspace(const SvdFactors& f, double tol = kSigmaOneTol);

std::vector<CVector> matrix_columns(const CMatrix& m);

void require_finite(const CMatrix& A, const char* what);
void require_finite(const CVector& v, const char* what);

/// Haar-ish random unitary (QR of a Gaussian matrix with phase-fixed R).
CMatrix random_unitary(int n, uint64_t seed);

CVector random_cvector(int n, uint64_t seed, double scale = 1.0);

/// Random matrix with operator norm <= bound (Gaussian rescaled).
CMatrix random_contraction(int n, uint64_t seed, double bound);

}  // namespace focklab
