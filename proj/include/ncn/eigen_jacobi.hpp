#pragma once
// Cyclic Jacobi eigendecomposition for dense symmetric matrices. Chosen for
// bit-reproducible output: fixed sweep order, no data-dependent parallelism,
// adequate speed at desk scale (dimension up to a few hundred).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "ncn/errors.hpp"
#include "ncn/matrix.hpp"

namespace ncn {

// Eigenvectors are the columns of q, paired with lambda sorted ascending.
// Ties keep the order in which the sweep produced them.
struct EigenDecomposition {
    Matrix q;
    std::vector<double> lambda;
};

namespace detail {

inline double off_diagonal_norm(const std::vector<double>& w, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) s += w[i * n + j] * w[i * n + j];
    return std::sqrt(2.0 * s);
}

inline void jacobi_rotate(std::vector<double>& w, Matrix& q, std::size_t p, std::size_t r,
                          std::size_t n) {
    const double app = w[p * n + p];
    const double arr = w[r * n + r];
    const double apr = w[p * n + r];

    const double theta = (arr - app) / (2.0 * apr);
    double t;
    if (std::abs(theta) > 1e154)  // guard theta^2 against overflow; limiting value
        t = 1.0 / (2.0 * theta);
    else
        t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;
    const double tau = s / (1.0 + c);

    w[p * n + p] = app - t * apr;
    w[r * n + r] = arr + t * apr;
    w[p * n + r] = w[r * n + p] = 0.0;

    for (std::size_t i = 0; i < n; ++i) {
        if (i == p || i == r) continue;
        const double aip = w[i * n + p];
        const double air = w[i * n + r];
        const double nip = aip - s * (air + tau * aip);
        const double nir = air + s * (aip - tau * air);
        w[i * n + p] = w[p * n + i] = nip;
        w[i * n + r] = w[r * n + i] = nir;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double qip = q(i, p);
        const double qir = q(i, r);
        q(i, p) = qip - s * (qir + tau * qip);
        q(i, r) = qir + s * (qip - tau * qir);
    }
}

}  // namespace detail

inline EigenDecomposition jacobi_eigendecompose(const SymmetricMatrix& a) {
    const std::size_t n = a.dim();
    std::vector<double> w(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) w[i * n + j] = a(i, j);
    Matrix q = Matrix::identity(n);

    const double tol = 1e-12 * a.frobenius_norm();
    const int max_sweeps = 100;

    int sweep = 0;
    while (detail::off_diagonal_norm(w, n) > tol) {
        if (sweep >= max_sweeps)
            throw ConvergenceFailure("jacobi eigendecomposition: no convergence in 100 sweeps");

        // Early sweeps skip entries that are small against the remaining
        // off-diagonal mass; later sweeps rotate everything nonzero.
        double sum_off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) sum_off += std::abs(w[i * n + j]);
        const double thresh = sweep < 3 ? 0.2 * sum_off / double(n * n) : 0.0;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t r = p + 1; r < n; ++r) {
                const double apr = w[p * n + r];
                if (apr == 0.0 || std::abs(apr) <= thresh) continue;
                // Entries already negligible against the local diagonal are
                // flushed to zero instead of rotated.
                const double scale = std::abs(w[p * n + p]) + std::abs(w[r * n + r]);
                if (scale + std::abs(apr) == scale) {
                    w[p * n + r] = w[r * n + p] = 0.0;
                    continue;
                }
                detail::jacobi_rotate(w, q, p, r, n);
            }
        }
        ++sweep;
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return w[i * n + i] < w[j * n + j]; });

    EigenDecomposition out;
    out.lambda.resize(n);
    out.q = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.lambda[k] = w[order[k] * n + order[k]];
        for (std::size_t i = 0; i < n; ++i) out.q(i, k) = q(i, order[k]);
    }
    return out;
}

}  // namespace ncn
