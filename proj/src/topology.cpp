#include "focklab/topology.hpp"

#include <Eigen/QR>

namespace focklab {

namespace {

void require_contraction(const CMatrix& A, double tol, const char* who) {
    if (operator_norm(A) > 1.0 + tol)
        throw DomainError(std::string(who) + ": ||A|| > 1, symbol cannot induce a bounded operator");
}

}  // namespace

bool matrices_equivalent(const CMatrix& A, const CMatrix& D, double tol) {
    require_finite(A, "matrices_equivalent");
    require_finite(D, "matrices_equivalent");
    if (A.rows() != D.rows() || A.cols() != D.cols())
        throw InputError("matrices_equivalent: dimension mismatch");
    require_contraction(A, kSigmaOneTol, "matrices_equivalent");
    require_contraction(D, kSigmaOneTol, "matrices_equivalent");

    // Linearity reduces the quantifier over S_A (and S_D) to a basis.
    const CMatrix SA = fixed_subspace(A);
    for (int i = 0; i < SA.cols(); ++i) {
        if ((A * SA.col(i) - D * SA.col(i)).norm() > tol) return false;
    }
    const CMatrix SD = fixed_subspace(D);
    for (int i = 0; i < SD.cols(); ++i) {
        if ((A * SD.col(i) - D * SD.col(i)).norm() > tol) return false;
    }
    return true;
}

ComponentKey component_key(const CMatrix& A, double tol) {
    require_finite(A, "component_key");
    require_contraction(A, tol, "component_key");
    const int n = static_cast<int>(A.rows());
    ComponentKey key;
    key.S_basis = fixed_subspace(A, tol);
    key.j = static_cast<int>(key.S_basis.cols());
    if (key.j == 0) {
        key.P = CMatrix::Zero(n, n);
        key.action = CMatrix::Zero(0, 0);
        return key;
    }
    CMatrix T = A * key.S_basis;
    Eigen::HouseholderQR<CMatrix> qr(T);
    CMatrix Q = qr.householderQ() * CMatrix::Identity(n, key.j);
    key.P = Q * Q.adjoint();
    // Isometry diagnostic: the restricted action in the (S, A*S) bases is I_j
    // up to numerical error.
    key.action = Q.adjoint() * T;
    return key;
}

ComponentKey component_key(const CMatrix& A, const CVector& b, double tol) {
    ComponentKey key = component_key(A, tol);
    if (b.size() != A.rows()) throw InputError("component_key: b dimension mismatch");
    require_finite(b, "component_key");
    key.b_proj = key.P * b;
    key.has_b = true;
    return key;
}

bool keys_equal(const ComponentKey& k1, const ComponentKey& k2, double tol) {
    if (k1.j != k2.j) return false;
    if ((k1.P - k2.P).norm() > tol) return false;
    if (k1.has_b != k2.has_b) return false;
    if (k1.has_b) {
        const double scale = 1.0 + k1.b_proj.norm() + k2.b_proj.norm();
        if ((k1.b_proj - k2.b_proj).norm() > tol * scale) return false;
    }
    return true;
}

bool b_equivalent(const CMatrix& A, const CVector& b1, const CVector& b2, double tol) {
    const ComponentKey key = component_key(A);
    if (b1.size() != A.rows() || b2.size() != A.rows())
        throw InputError("b_equivalent: dimension mismatch");
    return (key.P * (b1 - b2)).norm() <= tol * (1.0 + b1.norm() + b2.norm());
}

bool same_component_composition(const AffineMap& phi1, const AffineMap& phi2, double p,
                                double q, double tol) {
    const Verdict v1 = classify_composition(phi1, p, q, tol);
    const Verdict v2 = classify_composition(phi2, p, q, tol);
    if (v1.kind == VerdictKind::Unbounded || v2.kind == VerdictKind::Unbounded)
        throw UnboundedError("same_component_composition: both operators must be bounded");
    if (q < p) return true;  // the whole space is path connected
    return matrices_equivalent(phi1.A, phi2.A);
}

bool same_component_weighted(const WeightedSymbol& w1, const WeightedSymbol& w2, double p,
                             double q, bool boundedness_asserted, double tol) {
    w1.validate();
    w2.validate();
    if (!boundedness_asserted)
        throw DomainError(
            "same_component_weighted: boundedness of weighted operators is not decided here; "
            "the caller must assert it");
    const double na1 = operator_norm(w1.phi.A);
    const double na2 = operator_norm(w2.phi.A);
    if (na1 > 1.0 + tol || na2 > 1.0 + tol)
        throw UnboundedError("same_component_weighted: ||A|| > 1 contradicts boundedness");
    if (q < p) {
        // Bounded weighted operators with q < p force ||A|| < 1.
        if (na1 > 1.0 - tol || na2 > 1.0 - tol)
            throw UnboundedError(
                "same_component_weighted: ||A|| = 1 with q < p contradicts the boundedness "
                "assertion");
        return true;
    }
    if (!matrices_equivalent(w1.phi.A, w2.phi.A)) return false;
    return b_equivalent(w1.phi.A, w1.phi.b, w2.phi.b);
}

bool is_isolated(const AffineMap& phi, double p, double q, double tol) {
    const Verdict v = classify_composition(phi, p, q, tol);
    if (v.kind == VerdictKind::Unbounded)
        throw UnboundedError("is_isolated: operator must be bounded");
    if (q < p) return false;
    const SvdFactors f = svd(phi.A);
    for (int i = 0; i < f.sigma.size(); ++i) {
        if (std::abs(f.sigma(i) - 1.0) > tol) return false;
    }
    return true;  // [A] = {A} for unitary A
}

}  // namespace focklab
