#include "focklab/operators.hpp"

#include <Eigen/QR>
#include <cmath>

#include "focklab/rng.hpp"

namespace focklab {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double log_abs_psi(const SymbolFn& psi, const CVector& z) {
    const double a = std::abs(psi.evaluate(z));
    return a > 0.0 ? std::log(a) : -std::numeric_limits<double>::infinity();
}

/// Projector onto A(S_A), with S the orthonormal basis of S_A.
CMatrix range_projector(const CMatrix& A, const CMatrix& S) {
    const int n = static_cast<int>(A.rows());
    if (S.cols() == 0) return CMatrix::Zero(n, n);
    // A is isometric on S_A, so the columns of A*S are already orthonormal
    // up to the working tolerance; a thin QR tidies them.
    CMatrix T = A * S;
    Eigen::HouseholderQR<CMatrix> qr(T);
    CMatrix Q = qr.householderQ() * CMatrix::Identity(n, static_cast<int>(S.cols()));
    return Q * Q.adjoint();
}

void require_normalized_diagonal(const WeightedSymbol& w, double tol) {
    const CMatrix& A = w.phi.A;
    const int n = w.dim();
    double offdiag = 0.0;
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            if (i != k) offdiag = std::max(offdiag, std::abs(A(i, k)));
    if (offdiag > 1e-10) throw InputError("expected a normalized (diagonal) symbol");
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const Complex d = A(i, i);
        if (std::abs(d.imag()) > 1e-10 || d.real() < -1e-12)
            throw InputError("expected nonnegative diagonal entries");
        if (d.real() > prev + tol) throw InputError("expected nonincreasing diagonal entries");
        prev = d.real();
    }
}

}  // namespace

std::string to_string(VerdictKind k) {
    switch (k) {
        case VerdictKind::Unbounded: return "Unbounded";
        case VerdictKind::BoundedNotCompact: return "BoundedNotCompact";
        case VerdictKind::Compact: return "Compact";
    }
    return "?";
}

std::string to_string(Regime r) {
    return r == Regime::PLeqQ ? "p<=q" : "q<p";
}

Normalization normalize(const WeightedSymbol& w, double tol) {
    w.validate();
    const SvdFactors f = svd(w.phi.A);
    if (f.sigma.size() > 0 && f.sigma(0) > 1.0 + tol)
        throw DomainError("normalize: ||A|| > 1, symbol cannot induce a bounded operator");
    Normalization out;
    out.U = f.U;
    out.V = f.V;
    out.A_tilde = f.sigma;
    out.b_tilde = f.V.adjoint() * w.phi.b;
    out.psi_tilde = w.psi.compose_affine(AffineMap::linear(f.U.adjoint()));
    out.tol = tol;
    out.s = 0;
    out.j = 0;
    for (int i = 0; i < f.sigma.size(); ++i) {
        if (f.sigma(i) > tol) ++out.s;
        if (std::abs(f.sigma(i) - 1.0) <= tol) ++out.j;
    }
    return out;
}

Verdict classify_composition(const AffineMap& phi, double p, double q, double tol) {
    phi.validate();
    if (!(p > 0.0) || !(q > 0.0)) throw InputError("classify_composition: p, q must be positive");
    const Regime regime = p <= q ? Regime::PLeqQ : Regime::QLessP;
    const SvdFactors f = svd(phi.A);
    const double na = f.sigma.size() > 0 ? f.sigma(0) : 0.0;

    if (na > 1.0 + tol) return {VerdictKind::Unbounded, regime, na - 1.0, tol};
    if (na <= 1.0 - tol) return {VerdictKind::Compact, regime, 1.0 - na, tol};

    // ||A|| = 1 within tolerance.
    if (regime == Regime::QLessP)
        return {VerdictKind::Unbounded, regime, std::abs(na - 1.0), tol};

    const CMatrix S = fixed_subspace(f, tol);
    const CMatrix P = range_projector(phi.A, S);
    const double pb = (P * phi.b).norm();
    const double threshold = 10.0 * tol * (1.0 + phi.b.norm());
    if (pb <= threshold)
        return {VerdictKind::BoundedNotCompact, regime, threshold - pb, tol};
    return {VerdictKind::Unbounded, regime, pb - threshold, tol};
}

SymbolFn apply(const WeightedSymbol& w, const SymbolFn& f) {
    w.validate();
    if (f.dim() != w.dim()) throw InputError("apply: dimension mismatch");
    return w.psi.multiply(f.compose_affine(w.phi));
}

double m_quantity(const WeightedSymbol& w, const CVector& z) {
    if (z.size() != w.dim()) throw InputError("m_quantity: dimension mismatch");
    const CVector img = w.phi(z);
    return std::abs(w.psi.evaluate(z)) *
           std::exp(0.5 * (img.squaredNorm() - z.squaredNorm()));
}

MSupEstimate m_sup_estimate(const WeightedSymbol& w, int budget, uint64_t seed) {
    w.validate();
    const int n = w.dim();
    const int dims = 2 * n;
    const double outer_radius = 16.0;
    const double radii[4] = {2.0, 4.0, 8.0, 16.0};

    auto log_m = [&](const Eigen::VectorXd& x) {
        CVector z(n);
        for (int i = 0; i < n; ++i) z(i) = Complex(x(2 * i), x(2 * i + 1));
        const CVector img = w.phi(z);
        return log_abs_psi(w.psi, z) + 0.5 * (img.squaredNorm() - z.squaredNorm());
    };
    auto clip = [&](Eigen::VectorXd& x) {
        const double r = x.norm();
        if (r > outer_radius) x *= outer_radius / r;
    };

    MSupEstimate est;
    double best = -std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_x = Eigen::VectorXd::Zero(dims);
    const int iters = std::max(40, budget);

    int start_id = 0;
    for (double R : radii) {
        for (int s = 0; s < 8; ++s, ++start_id) {
            SplitMix64 rng = substream(seed, 0x300u + static_cast<uint64_t>(start_id));
            Eigen::VectorXd x(dims);
            for (int i = 0; i < dims; ++i) x(i) = rng.normal();
            if (x.norm() > 0) x *= R / x.norm();
            double fx = log_m(x);
            ++est.evaluations;
            double h = 0.5 * R;
            for (int it = 0; it < iters && h > 1e-5; ++it) {
                bool improved = false;
                for (int i = 0; i < dims; ++i) {
                    for (double sgn : {1.0, -1.0}) {
                        Eigen::VectorXd y = x;
                        y(i) += sgn * h;
                        clip(y);
                        const double fy = log_m(y);
                        ++est.evaluations;
                        if (fy > fx) {
                            x = y;
                            fx = fy;
                            improved = true;
                        }
                    }
                }
                if (!improved) h *= 0.5;
            }
            if (fx > best) {
                best = fx;
                best_x = x;
            }
        }
    }
    est.value = std::isfinite(best) ? std::exp(best) : 0.0;
    CVector z(n);
    for (int i = 0; i < n; ++i) z(i) = Complex(best_x(2 * i), best_x(2 * i + 1));
    est.argmax = z;
    est.diverging = best_x.norm() >= 0.95 * outer_radius;
    return est;
}

NormEstimate ell_quantity(const WeightedSymbol& w, const CVector& z_slice, double q,
                          const NormBudget& budget) {
    w.validate();
    require_normalized_diagonal(w, kSigmaOneTol);
    const int n = w.dim();
    int s = 0;
    for (int i = 0; i < n; ++i)
        if (w.phi.A(i, i).real() > kSigmaOneTol) ++s;
    if (s == 0)
        throw DomainError("ell_quantity: rank 0 (constant map); use the m quantity instead");
    if (z_slice.size() != s) throw InputError("ell_quantity: slice must have dimension rank A");

    // |phi(z)|^2 depends on z only through z_[s].
    double img_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const Complex az = i < s ? w.phi.A(i, i) * z_slice(i) + w.phi.b(i) : w.phi.b(i);
        img_sq += std::norm(az);
    }
    const double prefactor = std::exp(0.5 * (img_sq - z_slice.squaredNorm()));

    if (s == n) {
        NormEstimate est;
        est.method = NormMethod::ExactGram;
        est.value = prefactor * std::abs(w.psi.evaluate(z_slice));
        est.abs_error = 0.0;
        return est;
    }
    const SymbolFn slice = w.psi.fix_prefix(z_slice);
    NormEstimate est = fock_norm_auto(slice, {n - s, q}, budget);
    est.value *= prefactor;
    est.abs_error *= prefactor;
    return est;
}

EllIntegrability ell_integrability_estimate(const WeightedSymbol& w, double p, double q,
                                            long samples_per_shell, uint64_t seed) {
    if (!(q < p)) throw InputError("ell_integrability_estimate requires q < p");
    w.validate();
    require_normalized_diagonal(w, kSigmaOneTol);
    const int n = w.dim();
    int s = 0;
    for (int i = 0; i < n; ++i)
        if (w.phi.A(i, i).real() > kSigmaOneTol) ++s;
    if (s == 0) throw DomainError("ell_integrability_estimate: rank 0");

    const double r_exp = p * q / (p - q);
    NormBudget small;
    small.nodes_per_axis = 16;
    small.samples = 4000;
    small.seed = seed;

    EllIntegrability out;
    const double radii[4] = {1.0, 2.0, 4.0, 8.0};
    double ball_vol_unit = std::pow(kPi, s);  // volume of unit ball in C^s = pi^s / s!
    for (int k = 2; k <= s; ++k) ball_vol_unit /= k;

    for (int shell = 0; shell < 4; ++shell) {
        const double R = radii[shell];
        long double acc = 0.0L;
        for (long i = 0; i < samples_per_shell; ++i) {
            SplitMix64 rng = substream(seed, 0x700000u + static_cast<uint64_t>(shell) * 1000003u +
                                                 static_cast<uint64_t>(i));
            CVector dir(s);
            for (int c = 0; c < s; ++c) dir(c) = rng.complex_normal();
            if (dir.norm() > 0) dir /= dir.norm();
            const double radius = R * std::pow(rng.uniform01_open(), 1.0 / (2.0 * s));
            const CVector zs = radius * dir;
            const double ell = ell_quantity(w, zs, q, small).value;
            acc += std::pow(ell, r_exp);
        }
        const double volume = ball_vol_unit * std::pow(R, 2.0 * s);
        out.shell_values.push_back(volume * static_cast<double>(acc) /
                                   static_cast<double>(samples_per_shell));
    }
    out.value = out.shell_values.back();
    const double a2 = out.shell_values[2] - out.shell_values[1];
    const double a3 = out.shell_values[3] - out.shell_values[2];
    out.nonintegrable_flag = a3 > 0.5 * a2 && a3 > 1e-12 * (1.0 + out.value);
    return out;
}

PsiStar extract_psi_star(const WeightedSymbol& w, double tol, uint64_t seed) {
    w.validate();
    Normalization norm = normalize(w, tol);
    const int n = w.dim();
    if (norm.j < 1)
        throw DomainError("extract_psi_star: requires ||A|| = 1 (no unit singular value)");
    const int j = norm.j;

    const bool psi_is_one = SymbolFn::approx_equal(w.psi, SymbolFn::one(n), 1e-12);
    if (psi_is_one && norm.b_tilde.head(j).norm() > 1e-9 * (1.0 + w.phi.b.norm()))
        throw DomainError(
            "extract_psi_star: psi == 1 requires b~_[j] = 0 (operator is unbounded)");

    // g(z) = psi~(z) e^{<z_[j], b~_[j]>} must not depend on z_[j].
    CVector wfull = CVector::Zero(n);
    wfull.head(j) = norm.b_tilde.head(j);
    const SymbolFn g = norm.psi_tilde.multiply(kernel(wfull));

    double max_residual = 0.0;
    SplitMix64 rng = substream(seed, 0xe57au);
    for (int block = 0; block < 2; ++block) {
        CVector ztail(n - j);
        Complex v0;
        double v0_abs = 0.0;
        for (int attempt = 0; attempt < 8; ++attempt) {
            for (int i = 0; i < n - j; ++i) ztail(i) = rng.complex_normal(0.5);
            CVector z = CVector::Zero(n);
            z.tail(n - j) = ztail;
            v0 = g.evaluate(z);
            v0_abs = std::abs(v0);
            if (v0_abs > 1e-8) break;
        }
        for (int trial = 0; trial < 50; ++trial) {
            CVector z = CVector::Zero(n);
            for (int i = 0; i < j; ++i) z(i) = rng.complex_normal(1.5);
            z.tail(n - j) = ztail;
            const Complex v = g.evaluate(z);
            max_residual = std::max(max_residual, std::abs(v - v0) / (1.0 + v0_abs));
        }
    }
    if (max_residual > 1e-9)
        throw DomainError(
            "extract_psi_star: symbol not bounded-compatible (psi~ e^{<z_[j],b~_[j]>} depends on "
            "z_[j]; m(psi,phi) is infinite)");

    PsiStar out;
    out.j = j;
    out.b_tilde_j = norm.b_tilde.head(j);
    out.psi_star = g.fix_prefix(CVector::Zero(j));
    out.norm = std::move(norm);
    out.independence_residual = max_residual;
    return out;
}

NormEstimate weighted_norm_upper_bound(const WeightedSymbol& w, double p, double q,
                                       const NormBudget& budget, double tol) {
    w.validate();
    if (!(p > 0.0) || !(q > 0.0)) throw InputError("weighted_norm_upper_bound: bad exponents");
    const int n = w.dim();
    const double na = operator_norm(w.phi.A);
    if (na > 1.0 + tol) throw UnboundedError("weighted_norm_upper_bound: ||A|| > 1");

    auto finish = [&](double prefactor, int d, const SymbolFn& weight, const CMatrix& B,
                      const CVector& c) {
        // prefactor * [ (q/2pi)^d Int |weight|^q e^{q(|Bz+c|^2 - |z|^2)/2} dA ]^{1/q}
        auto F = [&](const CVector& z) {
            const CVector img = B * z + c;
            return std::pow(std::abs(weight.evaluate(z)), q) *
                   std::exp(0.5 * q * img.squaredNorm());
        };
        const NormMethod method = 2 * d <= 8 ? NormMethod::Quadrature : NormMethod::MonteCarlo;
        CMatrix env = B.adjoint() * B;
        NormEstimate raw = gaussian_weighted_mean(d, q, F, method, budget,
                                                  d > 0 ? &env : nullptr);
        NormEstimate est;
        est.method = raw.method;
        est.samples_or_nodes = raw.samples_or_nodes;
        est.seed = raw.seed;
        // An upper bound must stay an upper bound: take the inflated integral.
        est.value = prefactor * std::pow(std::max(0.0, raw.value + raw.abs_error), 1.0 / q);
        const double base = prefactor * std::pow(std::max(0.0, raw.value), 1.0 / q);
        est.abs_error = est.value - base;
        return est;
    };

    if (na <= 1.0 - tol) {
        return finish(1.0, n, w.psi, w.phi.A, w.phi.b);
    }

    // ||A|| = 1: only p <= q admits a bounded operator; factor through the
    // lem-psiphi structure and the translation operator T.
    if (p > q)
        throw UnboundedError("weighted_norm_upper_bound: ||A|| = 1 with q < p is unbounded");
    const PsiStar star = extract_psi_star(w, tol, budget.seed);
    const int j = star.j;
    const int d = n - j;
    const double t_norm = std::exp(0.5 * star.b_tilde_j.squaredNorm());
    const double embed = std::pow(q / p, static_cast<double>(n) / q);
    CMatrix Atail = CMatrix::Zero(d, d);
    for (int i = 0; i < d; ++i) Atail(i, i) = star.norm.A_tilde(j + i);
    const CVector btail = star.norm.b_tilde.tail(d);
    return finish(t_norm * embed, d, star.psi_star, Atail, btail);
}

}  // namespace focklab
