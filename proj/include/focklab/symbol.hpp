#pragma once

// Entire functions of the form  f(z) = sum_k c_k z^{alpha_k} e^{<z, w_k>}
// with <z,w> = sum_i z_i conj(w_i). This class contains the kernels, all
// weights handled by the theory, and is exactly closed under affine
// composition, products and partial derivatives.

#include <optional>
#include <vector>

#include "focklab/affine.hpp"
#include "focklab/linalg.hpp"

namespace focklab {

struct SymbolTerm {
    Complex coeff;
    std::vector<int> alpha;  // monomial exponents, size n
    CVector freq;            // w in e^{<z,w>}, size n
};

class SymbolFn {
public:
    SymbolFn() : dim_(0) {}
    explicit SymbolFn(int dim) : dim_(dim) {}

    static SymbolFn zero(int dim) { return SymbolFn(dim); }
    static SymbolFn constant(int dim, Complex c);
    static SymbolFn one(int dim) { return constant(dim, 1.0); }
    static SymbolFn monomial(int dim, std::vector<int> alpha, Complex c = 1.0);
    static SymbolFn coordinate(int dim, int i);
    static SymbolFn from_terms(int dim, std::vector<SymbolTerm> terms);

    int dim() const { return dim_; }
    const std::vector<SymbolTerm>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Complex evaluate(const CVector& z) const;

    /// f(Az + b), expanded back into the class.
    SymbolFn compose_affine(const AffineMap& phi) const;

    SymbolFn multiply(const SymbolFn& g) const;
    SymbolFn partial_derivative(int i) const;

    SymbolFn add(const SymbolFn& g) const;
    SymbolFn subtract(const SymbolFn& g) const;
    SymbolFn scaled(Complex c) const;

    /// f(values, .) as a function of the remaining dim - s variables.
    SymbolFn fix_prefix(const CVector& values) const;

    /// View as a function of (u, z) in dimension lead + dim, constant in u.
    SymbolFn embed_leading(int lead) const;

    /// True when every term has alpha = 0 (pure kernel combination).
    bool all_exponents_zero() const;
    int max_total_degree() const;

    /// Term-by-term comparison of canonical forms, relative tolerance on
    /// coefficients and frequencies.
    static bool approx_equal(const SymbolFn& f, const SymbolFn& g, double tol = 1e-10);

    /// If g == c * f as canonical forms, returns c.
    static std::optional<Complex> proportionality_ratio(const SymbolFn& f,
                                                        const SymbolFn& g,
                                                        double tol = 1e-10);

private:
    void canonicalize();

    int dim_;
    std::vector<SymbolTerm> terms_;
};

inline SymbolFn operator*(const SymbolFn& f, const SymbolFn& g) { return f.multiply(g); }
inline SymbolFn operator+(const SymbolFn& f, const SymbolFn& g) { return f.add(g); }
inline SymbolFn operator-(const SymbolFn& f, const SymbolFn& g) { return f.subtract(g); }

/// K_w(z) = e^{<z,w>}.
SymbolFn kernel(const CVector& w);

/// k_w = e^{-|w|^2/2} K_w, the unit-norm kernel.
SymbolFn normalized_kernel(const CVector& w);

}  // namespace focklab
