#include "focklab/norms.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "focklab/rng.hpp"

namespace focklab {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

Complex dot_conj(const CVector& z, const CVector& w) {
    Complex s = 0.0;
    for (int i = 0; i < z.size(); ++i) s += z(i) * std::conj(w(i));
    return s;
}

long tensor_grid_size(int axes, int nodes) {
    double total = 1.0;
    for (int i = 0; i < axes; ++i) total *= nodes;
    if (total > 5e8) throw BudgetError("quadrature grid too large");
    return static_cast<long>(total);
}

// Tensor Gauss-Hermite evaluation of J at a fixed node count.
double quadrature_value(int d, double q, const std::function<double(const CVector&)>& F,
                        int nodes_per_axis) {
    RVector nodes, weights;
    gauss_hermite(nodes_per_axis, nodes, weights);
    const int axes = 2 * d;
    const long total = tensor_grid_size(axes, nodes_per_axis);
    const double scale = std::sqrt(2.0 / q);

    std::vector<int> idx(axes, 0);
    CVector z(d);
    long double acc = 0.0L;
    for (long g = 0; g < total; ++g) {
        double wprod = 1.0;
        for (int a = 0; a < axes; ++a) wprod *= weights(idx[a]);
        for (int i = 0; i < d; ++i) {
            z(i) = Complex(scale * nodes(idx[2 * i]), scale * nodes(idx[2 * i + 1]));
        }
        acc += static_cast<long double>(wprod * F(z));
        for (int a = 0; a < axes; ++a) {
            if (++idx[a] < nodes_per_axis) break;
            idx[a] = 0;
        }
    }
    // (q/2pi)^d (2/q)^d prod(w) = pi^{-d} prod(w)
    return static_cast<double>(acc) * std::pow(kPi, -d);
}

}  // namespace

std::string to_string(NormMethod m) {
    switch (m) {
        case NormMethod::ExactGram: return "ExactGram";
        case NormMethod::Quadrature: return "Quadrature";
        case NormMethod::MonteCarlo: return "MonteCarlo";
    }
    return "?";
}

void gauss_hermite(int n_nodes, RVector& nodes, RVector& weights) {
    if (n_nodes < 1) throw InputError("gauss_hermite: need at least one node");
    RMatrix T = RMatrix::Zero(n_nodes, n_nodes);
    for (int k = 1; k < n_nodes; ++k) {
        const double off = std::sqrt(k / 2.0);
        T(k, k - 1) = off;
        T(k - 1, k) = off;
    }
    Eigen::SelfAdjointEigenSolver<RMatrix> es(T);
    nodes = es.eigenvalues();
    weights.resize(n_nodes);
    const double sqrt_pi = std::sqrt(kPi);
    for (int k = 0; k < n_nodes; ++k) {
        const double v0 = es.eigenvectors()(0, k);
        weights(k) = sqrt_pi * v0 * v0;
    }
}

NormEstimate gaussian_weighted_mean(int d, double q,
                                    const std::function<double(const CVector&)>& F,
                                    NormMethod method, const NormBudget& budget,
                                    const CMatrix* envelope) {
    if (d < 0) throw InputError("gaussian_weighted_mean: negative dimension");
    if (!(q > 0.0)) throw InputError("gaussian_weighted_mean: q must be positive");
    NormEstimate est;
    est.method = method;
    if (d == 0) {
        // C^0 integral is the single evaluation at the empty point.
        est.value = F(CVector(0));
        est.abs_error = 0.0;
        est.samples_or_nodes = 1;
        return est;
    }

    if (method == NormMethod::Quadrature) {
        if (2 * d > 8) throw BudgetError("quadrature limited to 2n <= 8 real dimensions");
        const int B = std::max(8, budget.nodes_per_axis);
        const int Bref = std::max(8, B - 6);
        const double v = quadrature_value(d, q, F, B);
        const double vref = quadrature_value(d, q, F, Bref);
        est.value = v;
        est.abs_error = std::max(2.0 * std::abs(v - vref), 1e-14 * (1.0 + std::abs(v)));
        est.samples_or_nodes = B;
        return est;
    }

    if (method != NormMethod::MonteCarlo)
        throw UnsupportedMethodError("gaussian_weighted_mean: ExactGram has no integrand form");

    // Importance transform. With envelope E and Q = I - E (Hermitian PD),
    // sampling density (q/2pi)^d det(Q) e^{-q z^* Q z / 2} gives
    // J = E[F(z) e^{-q z^* E z / 2}] / det(Q).
    const long N = std::max<long>(budget.samples, 16);
    CMatrix sqrt_qinv;  // maps iid complex normals to the sampling covariance
    double det_q = 1.0;
    const bool shifted = envelope != nullptr;
    CMatrix E;
    if (shifted) {
        E = *envelope;
        CMatrix Q = CMatrix::Identity(d, d) - E;
        Eigen::SelfAdjointEigenSolver<CMatrix> es(Q);
        if (es.eigenvalues().minCoeff() < 1e-8)
            throw BudgetError("importance envelope too close to singular (||A|| ~ 1)");
        RVector lam = es.eigenvalues();
        CMatrix Vc = es.eigenvectors();
        CMatrix D = CMatrix::Zero(d, d);
        for (int i = 0; i < d; ++i) {
            D(i, i) = 1.0 / std::sqrt(lam(i));
            det_q *= lam(i);
        }
        sqrt_qinv = Vc * D * Vc.adjoint();
    }

    const double var_per_comp = 1.0 / q;
    long double sum = 0.0L, sumsq = 0.0L;
    CVector z(d), g(d);
    for (long i = 0; i < N; ++i) {
        SplitMix64 rng = substream(budget.seed, static_cast<uint64_t>(i));
        for (int k = 0; k < d; ++k) g(k) = rng.complex_normal(var_per_comp);
        double w;
        if (shifted) {
            z = sqrt_qinv * g;
            const double quad = (z.adjoint() * (E * z))(0).real();
            w = F(z) * std::exp(-0.5 * q * quad);
        } else {
            w = F(g);
        }
        sum += w;
        sumsq += static_cast<long double>(w) * w;
    }
    const double mean = static_cast<double>(sum / N);
    const double var = std::max(0.0, static_cast<double>(sumsq / N) - mean * mean);
    const double stderr3 = 3.0 * std::sqrt(var / static_cast<double>(N));
    est.value = shifted ? mean / det_q : mean;
    est.abs_error = shifted ? stderr3 / det_q : stderr3;
    est.samples_or_nodes = N;
    est.seed = budget.seed;
    return est;
}

NormEstimate fock_norm(const SymbolFn& f, const FockParams& params, NormMethod method,
                       const NormBudget& budget) {
    params.validate();
    if (f.dim() != params.n) throw InputError("fock_norm: dimension mismatch");
    const double p = params.p;

    if (f.is_zero()) {
        NormEstimate est;
        est.method = method;
        return est;
    }

    if (method == NormMethod::ExactGram) {
        if (p != 2.0)
            throw UnsupportedMethodError("ExactGram requires p = 2");
        if (!f.all_exponents_zero())
            throw UnsupportedMethodError("ExactGram requires a pure kernel combination");
        // <K_w, K_{w'}>_2 = e^{<w', w>}; Hermitian Gram sum.
        long double acc = 0.0L;
        const auto& terms = f.terms();
        for (const auto& tk : terms) {
            for (const auto& tl : terms) {
                const Complex g = tk.coeff * std::conj(tl.coeff) * std::exp(dot_conj(tk.freq, tl.freq));
                acc += g.real();
            }
        }
        NormEstimate est;
        est.value = std::sqrt(std::max(0.0L, acc));
        est.abs_error = 0.0;
        est.method = NormMethod::ExactGram;
        est.samples_or_nodes = static_cast<long>(terms.size());
        return est;
    }

    auto integrand = [&](const CVector& z) { return std::pow(std::abs(f.evaluate(z)), p); };
    NormEstimate raw = gaussian_weighted_mean(params.n, p, integrand, method, budget);
    NormEstimate est;
    est.method = raw.method;
    est.samples_or_nodes = raw.samples_or_nodes;
    est.seed = raw.seed;
    est.value = std::pow(std::max(0.0, raw.value), 1.0 / p);
    const double lo = std::pow(std::max(0.0, raw.value - raw.abs_error), 1.0 / p);
    const double hi = std::pow(std::max(0.0, raw.value + raw.abs_error), 1.0 / p);
    est.abs_error = std::max(est.value - lo, hi - est.value);
    return est;
}

NormEstimate fock_norm_auto(const SymbolFn& f, const FockParams& params,
                            const NormBudget& budget) {
    params.validate();
    if (params.p == 2.0 && f.all_exponents_zero())
        return fock_norm(f, params, NormMethod::ExactGram, budget);
    if (2 * params.n <= 8)
        return fock_norm(f, params, NormMethod::Quadrature, budget);
    return fock_norm(f, params, NormMethod::MonteCarlo, budget);
}

BoundReport check_pointwise_bound(const SymbolFn& f, const FockParams& params,
                                  const NormBudget& budget, long probes,
                                  const std::vector<CVector>& extra_probes) {
    BoundReport rep;
    rep.norm_used = fock_norm_auto(f, params, budget);
    rep.worst_margin = std::numeric_limits<double>::infinity();
    SplitMix64 rng = substream(budget.seed, 0xb0d1u);
    auto probe = [&](const CVector& z) {
        const double lhs = std::abs(f.evaluate(z)) * std::exp(-0.5 * z.squaredNorm());
        const double margin = rep.norm_used.value - lhs;
        if (margin < rep.worst_margin) {
            rep.worst_margin = margin;
            rep.worst_z = z;
        }
        ++rep.probes;
    };
    for (long k = 0; k < probes; ++k) {
        CVector z(params.n);
        const double scale = 0.5 + 2.5 * rng.uniform01();
        for (int i = 0; i < params.n; ++i) z(i) = rng.complex_normal(scale * scale);
        probe(z);
    }
    for (const auto& z : extra_probes) probe(z);
    rep.violated = rep.worst_margin < -rep.norm_used.abs_error - 1e-12 * (1.0 + rep.norm_used.value);
    return rep;
}

BoundReport check_derivative_bound(const SymbolFn& f, const FockParams& params, int i,
                                   const NormBudget& budget, long probes) {
    BoundReport rep;
    rep.norm_used = fock_norm_auto(f, params, budget);
    rep.worst_margin = std::numeric_limits<double>::infinity();
    const SymbolFn df = f.partial_derivative(i);
    const double e2 = std::exp(2.0);
    SplitMix64 rng = substream(budget.seed, 0xb0d2u);
    for (long k = 0; k < probes; ++k) {
        CVector z(params.n);
        const double scale = 0.5 + 1.5 * rng.uniform01();
        for (int c = 0; c < params.n; ++c) z(c) = rng.complex_normal(scale * scale);
        const double lhs = std::abs(df.evaluate(z));
        const double rhs = e2 * (1.0 + std::abs(z(i))) * std::exp(0.5 * z.squaredNorm()) *
                           rep.norm_used.value;
        const double margin = rhs - lhs;
        if (margin < rep.worst_margin) {
            rep.worst_margin = margin;
            rep.worst_z = z;
        }
        ++rep.probes;
    }
    const double err_scale = std::exp(2.0) * rep.norm_used.abs_error;
    rep.violated = rep.worst_margin < -err_scale - 1e-12;
    return rep;
}

EmbeddingReport check_embedding(const SymbolFn& f, double p, double q,
                                const NormBudget& budget) {
    if (!(0.0 < p && p < q)) throw InputError("check_embedding requires 0 < p < q");
    const int n = f.dim();
    NormBudget bq = budget;
    NormBudget bp = budget;
    bp.seed = budget.seed + 1;
    const NormEstimate nq = fock_norm_auto(f, {n, q}, bq);
    const NormEstimate np = fock_norm_auto(f, {n, p}, bp);
    const double c = std::pow(q / p, static_cast<double>(n) / q);
    EmbeddingReport rep;
    rep.lhs = nq.value;
    rep.rhs = c * np.value;
    rep.margin = rep.rhs - rep.lhs;
    rep.combined_error = nq.abs_error + c * np.abs_error;
    rep.violated = rep.margin < -rep.combined_error;
    return rep;
}

}  // namespace focklab
