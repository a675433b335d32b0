#pragma once
// Dense row-major matrix plus a symmetric matrix that stores a single
// triangle, so symmetry is a structural guarantee rather than a convention
// the caller has to maintain.

#include <cmath>
#include <cstddef>
#include <vector>

#include "ncn/errors.hpp"
#include "ncn/vector.hpp"

namespace ncn {

class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols)
        : r_(rows), c_(cols), a_(rows * cols, 0.0) {
        if (rows == 0 || cols == 0)
            throw InvalidParameter("matrix dimensions must be at least 1x1");
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const noexcept { return r_; }
    std::size_t cols() const noexcept { return c_; }

    double operator()(std::size_t i, std::size_t j) const noexcept { return a_[i * c_ + j]; }
    double& operator()(std::size_t i, std::size_t j) noexcept { return a_[i * c_ + j]; }

    // A x
    Vector times(const Vector& x) const {
        if (x.size() != c_) throw DimensionMismatch("matrix-vector product: size mismatch");
        std::vector<double> out(r_, 0.0);
        for (std::size_t i = 0; i < r_; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < c_; ++j) s += a_[i * c_ + j] * x[j];
            out[i] = s;
        }
        return Vector(std::move(out));
    }

    // A^T x
    Vector transpose_times(const Vector& x) const {
        if (x.size() != r_) throw DimensionMismatch("transposed matrix-vector product: size mismatch");
        std::vector<double> out(c_, 0.0);
        for (std::size_t j = 0; j < c_; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < r_; ++i) s += a_[i * c_ + j] * x[i];
            out[j] = s;
        }
        return Vector(std::move(out));
    }

    // A B
    Matrix times(const Matrix& b) const {
        if (c_ != b.rows()) throw DimensionMismatch("matrix product: inner dimensions differ");
        Matrix out(r_, b.cols());
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t k = 0; k < c_; ++k) {
                const double aik = a_[i * c_ + k];
                if (aik == 0.0) continue;
                for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
            }
        return out;
    }

    Matrix transposed() const {
        Matrix out(c_, r_);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < c_; ++j) out(j, i) = a_[i * c_ + j];
        return out;
    }

    double max_abs() const {
        double m = 0.0;
        for (double x : a_) m = std::max(m, std::abs(x));
        return m;
    }

private:
    std::size_t r_ = 0, c_ = 0;
    std::vector<double> a_;
};

class SymmetricMatrix {
public:
    SymmetricMatrix() = default;

    explicit SymmetricMatrix(std::size_t n) : n_(n), a_(n * (n + 1) / 2, 0.0) {
        if (n == 0) throw InvalidParameter("symmetric matrix dimension must be at least 1");
    }

    static SymmetricMatrix diagonal(const std::vector<double>& d) {
        SymmetricMatrix m(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m.set(i, i, d[i]);
        return m;
    }

    // Reads the lower triangle of a square dense matrix; the upper triangle
    // is ignored by construction.
    static SymmetricMatrix from_dense_lower(const Matrix& full) {
        if (full.rows() != full.cols())
            throw DimensionMismatch("from_dense_lower: matrix is not square");
        SymmetricMatrix m(full.rows());
        for (std::size_t i = 0; i < full.rows(); ++i)
            for (std::size_t j = 0; j <= i; ++j) m.set(i, j, full(i, j));
        return m;
    }

    std::size_t dim() const noexcept { return n_; }

    double operator()(std::size_t i, std::size_t j) const noexcept {
        return j <= i ? a_[idx(i, j)] : a_[idx(j, i)];
    }

    void set(std::size_t i, std::size_t j, double v) {
        if (!std::isfinite(v)) throw NonFiniteInput("symmetric matrix entry is not finite");
        if (j <= i)
            a_[idx(i, j)] = v;
        else
            a_[idx(j, i)] = v;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            s += a_[idx(i, i)] * a_[idx(i, i)];
            for (std::size_t j = 0; j < i; ++j) s += 2.0 * a_[idx(i, j)] * a_[idx(i, j)];
        }
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0.0;
        for (double x : a_) m = std::max(m, std::abs(x));
        return m;
    }

private:
    static std::size_t idx(std::size_t i, std::size_t j) noexcept { return i * (i + 1) / 2 + j; }

    std::size_t n_ = 0;
    std::vector<double> a_;  // packed lower triangle, row by row
};

}  // namespace ncn
