#pragma once

// The symbol phi(z) = Az + b.

#include "focklab/linalg.hpp"

namespace focklab {

struct AffineMap {
    CMatrix A;
    CVector b;

    int dim() const { return static_cast<int>(b.size()); }

    CVector operator()(const CVector& z) const { return A * z + b; }

    static AffineMap identity(int n) {
        return {CMatrix::Identity(n, n), CVector::Zero(n)};
    }
    static AffineMap linear(const CMatrix& A) {
        return {A, CVector::Zero(A.rows())};
    }
    static AffineMap constant_map(const CVector& b) {
        return {CMatrix::Zero(b.size(), b.size()), b};
    }

    void validate() const {
        require_finite(A, "AffineMap.A");
        require_finite(b, "AffineMap.b");
        if (A.rows() != A.cols() || A.rows() != b.size())
            throw InputError("AffineMap: dimension mismatch between A and b");
    }
};

}  // namespace focklab
