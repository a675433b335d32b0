#pragma once
// Positive-truncated inverse of a symmetric matrix, kept in factored form.
// Given an eigendecomposition Q diag(lambda) Q^T and a floor m > 0, the
// operator is Q diag(1 / max(|lambda_i|, m)) Q^T: negative curvature is
// flipped to positive, and eigenvalues inside (-m, m) are clamped to m so the
// inverse stays bounded by 1/m in spectral norm.

#include <cmath>
#include <cstddef>
#include <vector>

#include "ncn/eigen_jacobi.hpp"
#include "ncn/errors.hpp"
#include "ncn/matrix.hpp"
#include "ncn/vector.hpp"

namespace ncn {

struct PTInverse {
    Matrix q;
    std::vector<double> inv_abs_lambda;
    double m = 0.0;
};

inline PTInverse pt_inverse(const EigenDecomposition& eig, double m) {
    if (!(m > 0.0) || !std::isfinite(m))
        throw InvalidParameter("truncation floor m must be positive and finite");
    PTInverse out;
    out.q = eig.q;
    out.m = m;
    out.inv_abs_lambda.resize(eig.lambda.size());
    for (std::size_t i = 0; i < eig.lambda.size(); ++i)
        out.inv_abs_lambda[i] = 1.0 / std::max(std::abs(eig.lambda[i]), m);
    return out;
}

// Applies the factored operator to g as Q (D (Q^T g)) with two matrix-vector
// products, never assembling the dense inverse.
inline Vector pt_apply(const PTInverse& pti, const Vector& g) {
    if (g.size() != pti.inv_abs_lambda.size())
        throw DimensionMismatch("pt_apply: vector size does not match operator dimension");
    Vector y = pti.q.transpose_times(g);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] *= pti.inv_abs_lambda[i];
    return pti.q.times(y);
}

// g^T Hm^{-1} g computed in the eigenbasis. Nonnegative by construction, which
// is what makes it usable as a line-search decrement.
inline double quadratic_form(const PTInverse& pti, const Vector& g) {
    if (g.size() != pti.inv_abs_lambda.size())
        throw DimensionMismatch("quadratic_form: vector size does not match operator dimension");
    Vector y = pti.q.transpose_times(g);
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += pti.inv_abs_lambda[i] * y[i] * y[i];
    return s;
}

}  // namespace ncn
