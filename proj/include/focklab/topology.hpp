#pragma once

// The component atlas: equivalence A ~ D (agreement on the isometric
// subspaces), canonical class descriptors, [b]-equivalence within a class,
// same-component decisions for both operator spaces, and isolation tests.

#include <optional>

#include "focklab/operators.hpp"

namespace focklab {

/// Canonical descriptor of ([A], [b]). P is the orthogonal projector onto
/// A(S_A); it is independent of the SVD gauge, unlike S_basis and action.
struct ComponentKey {
    int j = 0;
    CMatrix S_basis;   // orthonormal basis of S_A = {z : |Az| = |z|}
    CMatrix P;         // projector onto A(S_A)
    CMatrix action;    // A|_{S_A} in the (S_basis, A*S_basis) bases; ~= I_j
    CVector b_proj;    // P * b (zero-size when no b was supplied)
    bool has_b = false;
};

/// A ~ D iff A xi = D xi for every xi with |A xi| = |xi| or |D xi| = |xi|.
/// Decided on the orthonormal bases of S_A and S_D.
bool matrices_equivalent(const CMatrix& A, const CMatrix& D, double tol = kEquivTol);

ComponentKey component_key(const CMatrix& A, double tol = kSigmaOneTol);
ComponentKey component_key(const CMatrix& A, const CVector& b, double tol = kSigmaOneTol);

/// Gauge-independent comparison of the (j, P, b_proj) part of two keys.
bool keys_equal(const ComponentKey& k1, const ComponentKey& k2, double tol = kProjectorTol);

/// b1 ~ b2 by the class [A]: ||P(b1 - b2)|| <= tol (1 + |b1| + |b2|).
bool b_equivalent(const CMatrix& A, const CVector& b1, const CVector& b2,
                  double tol = kProjectorTol);

/// Same path component of the composition-operator space. Both operators must
/// be bounded for (p, q); throws UnboundedError otherwise.
bool same_component_composition(const AffineMap& phi1, const AffineMap& phi2, double p,
                                double q, double tol = kSigmaOneTol);

/// Same path component of the weighted space. Boundedness of W_{psi,phi} is
/// not decidable here (the full criterion is outside this artifact); the
/// caller must assert it explicitly, validated only by the m/ell heuristics.
bool same_component_weighted(const WeightedSymbol& w1, const WeightedSymbol& w2, double p,
                             double q, bool boundedness_asserted,
                             double tol = kSigmaOneTol);

/// For p <= q: C_A with A unitary is an isolated point; q < p: never isolated.
/// Exposed for composition symbols only (the weighted case is not a paper
/// statement).
bool is_isolated(const AffineMap& phi, double p, double q, double tol = kSigmaOneTol);

}  // namespace focklab
