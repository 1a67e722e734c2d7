#include "focklab/linalg.hpp"

#include <Eigen/SVD>

#include "focklab/rng.hpp"

namespace focklab {

void require_finite(const CMatrix& A, const char* what) {
    if (!A.allFinite()) throw InputError(std::string(what) + ": non-finite entries");
}

void require_finite(const CVector& v, const char* what) {
    if (!v.allFinite()) throw InputError(std::string(what) + ": non-finite entries");
}

SvdFactors svd(const CMatrix& A) {
    require_finite(A, "svd");
    if (A.rows() != A.cols()) throw InputError("svd: matrix must be square");
    Eigen::JacobiSVD<CMatrix> dec(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    SvdFactors f;
    f.V = dec.matrixU();
    f.sigma = dec.singularValues();
    // Eigen factors A = U_e S V_e^*; the convention here is A = V S U.
    f.U = dec.matrixV().adjoint();
    return f;
}

double operator_norm(const CMatrix& A) {
    require_finite(A, "operator_norm");
    if (A.size() == 0) return 0.0;
    Eigen::JacobiSVD<CMatrix> dec(A);
    return dec.singularValues()(0);
}

int rank_with_tol(const CMatrix& A, double tol) {
    const SvdFactors f = svd(A);
    int r = 0;
    for (int i = 0; i < f.sigma.size(); ++i)
        if (f.sigma(i) > tol) ++r;
    return r;
}

CMatrix fixed_subspace(const SvdFactors& f, double tol) {
    const int n = static_cast<int>(f.sigma.size());
    if (n > 0 && f.sigma(0) > 1.0 + tol)
        throw DomainError("fixed_subspace: ||A|| > 1, symbol cannot induce a bounded operator");
    int j = 0;
    while (j < n && std::abs(f.sigma(j) - 1.0) <= tol) ++j;
    // Right singular vector u_i = U^* e_i satisfies A u_i = sigma_i (V e_i),
    // so the sigma = 1 block spans ker(I - A^*A).
    CMatrix basis(n, j);
    for (int i = 0; i < j; ++i) basis.col(i) = f.U.adjoint().col(i);
    return basis;
}

CMatrix fixed_subspace(const CMatrix& A, double tol) {
    return fixed_subspace(svd(A), tol);
}

std::vector<CVector> matrix_columns(const CMatrix& m) {
    std::vector<CVector> cols;
    cols.reserve(static_cast<size_t>(m.cols()));
    for (int i = 0; i < m.cols(); ++i) cols.push_back(m.col(i));
    return cols;
}

CMatrix random_unitary(int n, uint64_t seed) {
    SplitMix64 rng = substream(seed, 0x0221u);
    CMatrix g(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) g(i, k) = rng.complex_normal();
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ();
    CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the phase gauge so the output is a deterministic function of g.
    for (int i = 0; i < n; ++i) {
        Complex d = r(i, i);
        if (std::abs(d) > 0) q.col(i) *= d / std::abs(d);
    }
    return q;
}

CVector random_cvector(int n, uint64_t seed, double scale) {
    SplitMix64 rng = substream(seed, 0x0222u);
    CVector v(n);
    for (int i = 0; i < n; ++i) v(i) = scale * rng.complex_normal();
    return v;
}

CMatrix random_contraction(int n, uint64_t seed, double bound) {
    SplitMix64 rng = substream(seed, 0x0223u);
    CMatrix g(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) g(i, k) = rng.complex_normal();
    const double nrm = operator_norm(g);
    if (nrm == 0.0) return g;
    return g * (bound / nrm);
}

}  // namespace focklab
