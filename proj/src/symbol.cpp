#include "focklab/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace focklab {

namespace {

// Canonicalization key: exponents lexicographically, then frequencies rounded
// to 12 decimals so that equal-function inputs merge deterministically.
double round12(double x) { return std::nearbyint(x * 1e12); }

int compare_terms(const SymbolTerm& a, const SymbolTerm& b) {
    const size_t n = a.alpha.size();
    for (size_t i = 0; i < n; ++i) {
        if (a.alpha[i] != b.alpha[i]) return a.alpha[i] < b.alpha[i] ? -1 : 1;
    }
    for (int i = 0; i < a.freq.size(); ++i) {
        const double ar = round12(a.freq(i).real()), br = round12(b.freq(i).real());
        if (ar != br) return ar < br ? -1 : 1;
        const double ai = round12(a.freq(i).imag()), bi = round12(b.freq(i).imag());
        if (ai != bi) return ai < bi ? -1 : 1;
    }
    return 0;
}

Complex dot_conj(const CVector& z, const CVector& w) {
    Complex s = 0.0;
    for (int i = 0; i < z.size(); ++i) s += z(i) * std::conj(w(i));
    return s;
}

}  // namespace

void SymbolFn::canonicalize() {
    for (auto& t : terms_) {
        if (static_cast<int>(t.alpha.size()) != dim_ || t.freq.size() != dim_)
            throw InputError("SymbolFn: term dimension mismatch");
        for (int a : t.alpha)
            if (a < 0) throw InputError("SymbolFn: negative exponent");
        if (!std::isfinite(t.coeff.real()) || !std::isfinite(t.coeff.imag()))
            throw InputError("SymbolFn: non-finite coefficient");
        require_finite(t.freq, "SymbolFn.freq");
    }
    std::sort(terms_.begin(), terms_.end(),
              [](const SymbolTerm& a, const SymbolTerm& b) { return compare_terms(a, b) < 0; });
    std::vector<SymbolTerm> merged;
    for (auto& t : terms_) {
        if (!merged.empty() && compare_terms(merged.back(), t) == 0) {
            merged.back().coeff += t.coeff;
        } else {
            merged.push_back(t);
        }
    }
    terms_.clear();
    for (auto& t : merged) {
        if (std::abs(t.coeff) > 0.0) terms_.push_back(std::move(t));
    }
}

SymbolFn SymbolFn::constant(int dim, Complex c) {
    SymbolFn f(dim);
    if (c != 0.0) {
        f.terms_.push_back({c, std::vector<int>(dim, 0), CVector::Zero(dim)});
    }
    return f;
}

SymbolFn SymbolFn::monomial(int dim, std::vector<int> alpha, Complex c) {
    SymbolFn f(dim);
    f.terms_.push_back({c, std::move(alpha), CVector::Zero(dim)});
    f.canonicalize();
    return f;
}

SymbolFn SymbolFn::coordinate(int dim, int i) {
    std::vector<int> alpha(dim, 0);
    alpha.at(i) = 1;
    return monomial(dim, std::move(alpha));
}

SymbolFn SymbolFn::from_terms(int dim, std::vector<SymbolTerm> terms) {
    SymbolFn f(dim);
    f.terms_ = std::move(terms);
    f.canonicalize();
    return f;
}

Complex SymbolFn::evaluate(const CVector& z) const {
    if (z.size() != dim_) throw InputError("SymbolFn::evaluate: dimension mismatch");
    Complex s = 0.0;
    for (const auto& t : terms_) {
        Complex v = t.coeff;
        for (int i = 0; i < dim_; ++i) {
            for (int k = 0; k < t.alpha[i]; ++k) v *= z(i);
        }
        s += v * std::exp(dot_conj(z, t.freq));
    }
    return s;
}

SymbolFn SymbolFn::compose_affine(const AffineMap& phi) const {
    phi.validate();
    if (phi.dim() != dim_) throw InputError("compose_affine: dimension mismatch");
    const CMatrix& A = phi.A;
    const CVector& b = phi.b;
    const CMatrix Astar = A.adjoint();

    std::vector<SymbolTerm> out;
    for (const auto& t : terms_) {
        // e^{<Az+b, w>} = e^{<b,w>} e^{<z, A^*w>}
        const Complex expb = std::exp(dot_conj(b, t.freq));
        const CVector new_freq = Astar * t.freq;

        // (Az+b)^alpha expands into a polynomial in z.
        std::map<std::vector<int>, Complex> poly;
        poly[std::vector<int>(dim_, 0)] = 1.0;
        for (int i = 0; i < dim_; ++i) {
            for (int rep = 0; rep < t.alpha[i]; ++rep) {
                std::map<std::vector<int>, Complex> next;
                for (const auto& [beta, c] : poly) {
                    if (b(i) != 0.0) next[beta] += c * b(i);
                    for (int k = 0; k < dim_; ++k) {
                        if (A(i, k) == 0.0) continue;
                        std::vector<int> beta2 = beta;
                        ++beta2[k];
                        next[beta2] += c * A(i, k);
                    }
                }
                poly = std::move(next);
            }
        }
        for (const auto& [beta, c] : poly) {
            out.push_back({t.coeff * expb * c, beta, new_freq});
        }
    }
    return from_terms(dim_, std::move(out));
}

SymbolFn SymbolFn::multiply(const SymbolFn& g) const {
    if (g.dim_ != dim_) throw InputError("multiply: dimension mismatch");
    std::vector<SymbolTerm> out;
    out.reserve(terms_.size() * g.terms_.size());
    for (const auto& a : terms_) {
        for (const auto& b : g.terms_) {
            SymbolTerm t;
            t.coeff = a.coeff * b.coeff;
            t.alpha.resize(dim_);
            for (int i = 0; i < dim_; ++i) t.alpha[i] = a.alpha[i] + b.alpha[i];
            t.freq = a.freq + b.freq;
            out.push_back(std::move(t));
        }
    }
    return from_terms(dim_, std::move(out));
}

SymbolFn SymbolFn::partial_derivative(int i) const {
    if (i < 0 || i >= dim_) throw InputError("partial_derivative: coordinate out of range");
    std::vector<SymbolTerm> out;
    for (const auto& t : terms_) {
        if (t.alpha[i] > 0) {
            SymbolTerm d = t;
            d.coeff *= static_cast<double>(t.alpha[i]);
            --d.alpha[i];
            out.push_back(std::move(d));
        }
        // d/dz_i e^{<z,w>} = conj(w_i) e^{<z,w>}
        if (t.freq(i) != 0.0) {
            SymbolTerm d = t;
            d.coeff *= std::conj(t.freq(i));
            out.push_back(std::move(d));
        }
    }
    return from_terms(dim_, std::move(out));
}

SymbolFn SymbolFn::add(const SymbolFn& g) const {
    if (g.dim_ != dim_) throw InputError("add: dimension mismatch");
    std::vector<SymbolTerm> out = terms_;
    out.insert(out.end(), g.terms_.begin(), g.terms_.end());
    return from_terms(dim_, std::move(out));
}

SymbolFn SymbolFn::subtract(const SymbolFn& g) const { return add(g.scaled(-1.0)); }

SymbolFn SymbolFn::scaled(Complex c) const {
    std::vector<SymbolTerm> out = terms_;
    for (auto& t : out) t.coeff *= c;
    return from_terms(dim_, std::move(out));
}

SymbolFn SymbolFn::fix_prefix(const CVector& values) const {
    const int s = static_cast<int>(values.size());
    if (s < 0 || s > dim_) throw InputError("fix_prefix: bad prefix length");
    const int m = dim_ - s;
    std::vector<SymbolTerm> out;
    for (const auto& t : terms_) {
        SymbolTerm r;
        r.coeff = t.coeff * std::exp(dot_conj(values, t.freq.head(s)));
        for (int i = 0; i < s; ++i) {
            for (int k = 0; k < t.alpha[i]; ++k) r.coeff *= values(i);
        }
        r.alpha.assign(t.alpha.begin() + s, t.alpha.end());
        r.freq = t.freq.tail(m);
        out.push_back(std::move(r));
    }
    return from_terms(m, std::move(out));
}

SymbolFn SymbolFn::embed_leading(int lead) const {
    if (lead < 0) throw InputError("embed_leading: negative lead");
    std::vector<SymbolTerm> out;
    for (const auto& t : terms_) {
        SymbolTerm r;
        r.coeff = t.coeff;
        r.alpha.assign(lead, 0);
        r.alpha.insert(r.alpha.end(), t.alpha.begin(), t.alpha.end());
        r.freq = CVector::Zero(lead + dim_);
        r.freq.tail(dim_) = t.freq;
        out.push_back(std::move(r));
    }
    return from_terms(lead + dim_, std::move(out));
}

bool SymbolFn::all_exponents_zero() const {
    for (const auto& t : terms_)
        for (int a : t.alpha)
            if (a != 0) return false;
    return true;
}

int SymbolFn::max_total_degree() const {
    int d = 0;
    for (const auto& t : terms_) {
        int s = 0;
        for (int a : t.alpha) s += a;
        d = std::max(d, s);
    }
    return d;
}

bool SymbolFn::approx_equal(const SymbolFn& f, const SymbolFn& g, double tol) {
    if (f.dim_ != g.dim_) return false;
    if (f.terms_.size() != g.terms_.size()) return false;
    for (size_t k = 0; k < f.terms_.size(); ++k) {
        const auto& a = f.terms_[k];
        const auto& b = g.terms_[k];
        if (a.alpha != b.alpha) return false;
        const double scale = 1.0 + std::abs(a.coeff) + std::abs(b.coeff);
        if (std::abs(a.coeff - b.coeff) > tol * scale) return false;
        const double fscale = 1.0 + a.freq.norm() + b.freq.norm();
        if ((a.freq - b.freq).norm() > tol * fscale) return false;
    }
    return true;
}

std::optional<Complex> SymbolFn::proportionality_ratio(const SymbolFn& f, const SymbolFn& g,
                                                       double tol) {
    if (f.dim_ != g.dim_ || f.is_zero() || g.is_zero()) return std::nullopt;
    if (f.terms_.size() != g.terms_.size()) return std::nullopt;
    Complex ratio = 0.0;
    for (size_t k = 0; k < f.terms_.size(); ++k) {
        const auto& a = f.terms_[k];
        const auto& b = g.terms_[k];
        if (a.alpha != b.alpha) return std::nullopt;
        if ((a.freq - b.freq).norm() > tol * (1.0 + a.freq.norm())) return std::nullopt;
        const Complex r = b.coeff / a.coeff;
        if (k == 0) {
            ratio = r;
        } else if (std::abs(r - ratio) > tol * (1.0 + std::abs(ratio))) {
            return std::nullopt;
        }
    }
    return ratio;
}

SymbolFn kernel(const CVector& w) {
    require_finite(w, "kernel");
    const int n = static_cast<int>(w.size());
    return SymbolFn::from_terms(n, {{1.0, std::vector<int>(n, 0), w}});
}

SymbolFn normalized_kernel(const CVector& w) {
    require_finite(w, "normalized_kernel");
    const int n = static_cast<int>(w.size());
    const Complex c = std::exp(-0.5 * w.squaredNorm());
    return SymbolFn::from_terms(n, {{c, std::vector<int>(n, 0), w}});
}

}  // namespace focklab
