#pragma once

// Fock norm ||f||_{n,p} evaluation: exact Gram identity for p = 2 kernel
// combinations, tensor Gauss-Hermite quadrature, or seeded Monte Carlo.
// A shared Gaussian-weighted integrator backs the quadrature/MC routes and is
// reused by the Lipschitz-constant integrals in the homotopy module.

#include <functional>
#include <string>

#include "focklab/symbol.hpp"

namespace focklab {

struct FockParams {
    int n;
    double p;

    void validate() const {
        if (n < 1) throw InputError("FockParams: n must be >= 1");
        if (!(p > 0.0)) throw InputError("FockParams: p must be positive");
        // Estimator variance blows up as p -> 0; the theoretical range is open.
        if (p < 0.05) throw DomainError("FockParams: p below 0.05 is not supported");
    }
};

enum class NormMethod { ExactGram, Quadrature, MonteCarlo };

std::string to_string(NormMethod m);

struct NormEstimate {
    double value = 0.0;
    double abs_error = 0.0;  // half-width of the reported interval; 0 iff ExactGram
    NormMethod method = NormMethod::ExactGram;
    long samples_or_nodes = 0;
    uint64_t seed = 0;  // MonteCarlo only

    double upper() const { return value + abs_error; }
    double lower() const { return std::max(0.0, value - abs_error); }
};

struct NormBudget {
    int nodes_per_axis = 40;
    long samples = 200000;
    uint64_t seed = 0x5eedf0c5ull;
};

/// Gauss-Hermite nodes/weights for weight e^{-x^2} (Golub-Welsch).
void gauss_hermite(int n_nodes, RVector& nodes, RVector& weights);

/// J = (q/2pi)^d Integral_{C^d} F(z) e^{-q|z|^2/2} dA(z), F >= 0.
///
/// MonteCarlo draws z from the complex Gaussian matching the weight; when an
/// `envelope` E (Hermitian, I - E positive definite) is supplied, sampling is
/// importance-shifted to covariance (q(I-E))^{-1} and F is reweighted by
/// e^{-q z^* E z / 2}, which tames integrands growing like e^{q z^* E z / 2}.
NormEstimate gaussian_weighted_mean(int d, double q,
                                    const std::function<double(const CVector&)>& F,
                                    NormMethod method, const NormBudget& budget,
                                    const CMatrix* envelope = nullptr);

/// ||f||_{n,p} by the requested method.
///   ExactGram: p = 2 and all exponents zero; Gram identity, abs_error = 0.
///   Quadrature: tensor Gauss-Hermite over 2n real dimensions; 2n <= 8.
///   MonteCarlo: seeded, 3-standard-error interval.
NormEstimate fock_norm(const SymbolFn& f, const FockParams& params, NormMethod method,
                       const NormBudget& budget = {});

/// ExactGram when eligible, else quadrature when 2n <= 8, else Monte Carlo.
NormEstimate fock_norm_auto(const SymbolFn& f, const FockParams& params,
                            const NormBudget& budget = {});

struct BoundReport {
    double worst_margin = 0.0;  // min over probes of (rhs - lhs); negative = exceeded
    bool violated = false;      // exceeded beyond the norm estimate's error
    CVector worst_z;
    NormEstimate norm_used;
    long probes = 0;
};

/// Lemma-type check: |f(z)| e^{-|z|^2/2} <= ||f||_{n,p} on random z.
BoundReport check_pointwise_bound(const SymbolFn& f, const FockParams& params,
                                  const NormBudget& budget = {}, long probes = 200,
                                  const std::vector<CVector>& extra_probes = {});

/// |df/dz_i(z)| <= e^2 (1+|z_i|) e^{|z|^2/2} ||f||_{n,p} on random z.
BoundReport check_derivative_bound(const SymbolFn& f, const FockParams& params, int i,
                                   const NormBudget& budget = {}, long probes = 200);

struct EmbeddingReport {
    double lhs = 0.0;            // ||f||_{n,q}
    double rhs = 0.0;            // (q/p)^{n/q} ||f||_{n,p}
    double margin = 0.0;         // rhs - lhs
    double combined_error = 0.0;
    bool violated = false;
};

/// ||f||_{n,q} <= (q/p)^{n/q} ||f||_{n,p} for 0 < p < q.
EmbeddingReport check_embedding(const SymbolFn& f, double p, double q,
                                const NormBudget& budget = {});

}  // namespace focklab
