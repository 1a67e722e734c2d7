#pragma once

// Weighted symbols (psi, phi), the SVD-based normalization (psi~, phi~),
// boundedness/compactness classification of composition operators, the m and
// ell heuristics, and operator application W_{psi,phi} f = psi * (f o phi).

#include "focklab/norms.hpp"
#include "focklab/symbol.hpp"

namespace focklab {

struct WeightedSymbol {
    SymbolFn psi;
    AffineMap phi;

    int dim() const { return phi.dim(); }

    void validate() const {
        phi.validate();
        if (psi.dim() != phi.dim()) throw InputError("WeightedSymbol: psi/phi dimension mismatch");
        if (psi.is_zero()) throw InputError("WeightedSymbol: psi must be nonzero");
    }

    static WeightedSymbol composition(const AffineMap& phi) {
        return {SymbolFn::one(phi.dim()), phi};
    }
};

/// The tuple (U, V, A~, b~, psi~) with A = V A~ U, psi~(z) = psi(U^* z),
/// b~ = V^* b; s = rank A, j = #{i : a~_ii = 1 within tol}.
struct Normalization {
    CMatrix U;
    CMatrix V;
    RVector A_tilde;  // diagonal, nonincreasing
    CVector b_tilde;
    SymbolFn psi_tilde;
    int s = 0;
    int j = 0;
    double tol = kSigmaOneTol;

    AffineMap phi_tilde() const {
        return {CMatrix(A_tilde.cast<Complex>().asDiagonal()), b_tilde};
    }
};

enum class VerdictKind { Unbounded, BoundedNotCompact, Compact };
enum class Regime { PLeqQ, QLessP };

std::string to_string(VerdictKind k);
std::string to_string(Regime r);

struct Verdict {
    VerdictKind kind;
    Regime regime;
    double margin;  // distance of the deciding quantity from its threshold
    double tol;
};

Normalization normalize(const WeightedSymbol& w, double tol = kSigmaOneTol);

/// Theorems for C_phi between F^p and F^q. ||A|| > 1 yields an Unbounded
/// verdict, not an error.
Verdict classify_composition(const AffineMap& phi, double p, double q,
                             double tol = kSigmaOneTol);

/// W_{psi,phi} f = psi * (f o phi), exact in the symbol class.
SymbolFn apply(const WeightedSymbol& w, const SymbolFn& f);

/// m_z(psi,phi) = |psi(z)| e^{(|phi(z)|^2 - |z|^2)/2}.
double m_quantity(const WeightedSymbol& w, const CVector& z);

struct MSupEstimate {
    double value = 0.0;
    bool diverging = false;  // best point sits on the outer search shell
    CVector argmax;
    long evaluations = 0;
};

/// Heuristic sup of m_z by seeded multi-start ascent on log m_z over shells
/// of radius 2, 4, 8, 16.
MSupEstimate m_sup_estimate(const WeightedSymbol& w, int budget = 200,
                            uint64_t seed = 0x5eedf0c5ull);

/// ell_{z_[s]} for a pair already in the normalized diagonal class V_{q,s}:
/// e^{(|phi(z)|^2 - |z_[s]|^2)/2} ||psi(z_[s], .)||_{n-s, q}. Heuristic.
NormEstimate ell_quantity(const WeightedSymbol& w, const CVector& z_slice, double q,
                          const NormBudget& budget = {});

struct EllIntegrability {
    double value = 0.0;                 // integral over the largest ball probed
    bool nonintegrable_flag = false;    // annulus contributions not decaying
    std::vector<double> shell_values;   // integral per ball radius
};

/// Monte-Carlo probe of ell^{pq/(p-q)} over growing balls (q < p). Heuristic,
/// never a certificate.
EllIntegrability ell_integrability_estimate(const WeightedSymbol& w, double p, double q,
                                            long samples_per_shell = 400,
                                            uint64_t seed = 0x5eedf0c5ull);

struct PsiStar {
    int j = 0;
    CVector b_tilde_j;   // first j entries of b~
    SymbolFn psi_star;   // entire function of z'_[j] on C^{n-j}
    Normalization norm;
    double independence_residual = 0.0;
};

/// Lemma structure psi~(z) = e^{-<z_[j], b~_[j]>} psi~_*(z'_[j]) for ||A|| = 1
/// with m(psi,phi) < infinity. Independence of z_[j] is verified numerically;
/// failure means the boundedness hypothesis is violated.
PsiStar extract_psi_star(const WeightedSymbol& w, double tol = kSigmaOneTol,
                         uint64_t seed = 0x5eedf0c5ull);

/// Certified analytic upper bound on ||W_{psi,phi}||_{F^p -> F^q}:
/// the L^q norm of m_z for ||A|| < 1; the T-factorized bound through the
/// lem-psiphi structure for ||A|| = 1 (p <= q only).
NormEstimate weighted_norm_upper_bound(const WeightedSymbol& w, double p, double q,
                                       const NormBudget& budget = {},
                                       double tol = kSigmaOneTol);

}  // namespace focklab
