#pragma once
// Benchmark objectives. Each one implements analytic gradient and Hessian and,
// where the saddle is known in closed form, exposes its eigenstructure for
// trace projections.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "ncn/eigen_jacobi.hpp"
#include "ncn/errors.hpp"
#include "ncn/matrix.hpp"
#include "ncn/objective.hpp"
#include "ncn/rng.hpp"
#include "ncn/vector.hpp"

namespace ncn {

// f(x) = x1^2/2 - (lambda/2) x2^2. The origin is a strict saddle whose escape
// speed under gradient descent degrades with lambda while curvature-corrected
// steps do not, which makes this the canonical conditioning probe.
class QuadraticSaddle : public Objective {
   public:
    explicit QuadraticSaddle(double lambda) : Objective(2), lambda_(lambda) {
        if (!(lambda > 0.0) || lambda > 1.0 || !std::isfinite(lambda))
            throw InvalidParameter("quadratic saddle: lambda must lie in (0, 1]");
    }

    double lambda() const noexcept { return lambda_; }

    std::optional<EigenDecomposition> saddle_reference() const override {
        EigenDecomposition eig;
        eig.lambda = {-lambda_, 1.0};
        eig.q = Matrix(2, 2);
        eig.q(0, 1) = 1.0;  // eigenvalue 1 lives on x1
        eig.q(1, 0) = 1.0;  // eigenvalue -lambda lives on x2
        return eig;
    }

   private:
    double do_eval(const Vector& x) const override {
        return 0.5 * x[0] * x[0] - 0.5 * lambda_ * x[1] * x[1];
    }
    Vector do_gradient(const Vector& x) const override { return Vector{x[0], -lambda_ * x[1]}; }
    SymmetricMatrix do_hessian(const Vector& x) const override {
        (void)x;
        return SymmetricMatrix::diagonal({1.0, -lambda_});
    }

    double lambda_;
};

// f(x) = (1/2) sum_i d_i x_i^2 with arbitrary finite coefficients. Mixed signs
// give saddles of any index; the Hessian is constant.
class DiagonalQuadratic : public Objective {
   public:
    explicit DiagonalQuadratic(std::vector<double> d) : Objective(checked_dim(d)), d_(std::move(d)) {}

    std::optional<EigenDecomposition> saddle_reference() const override {
        const std::size_t n = d_.size();
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t i, std::size_t j) { return d_[i] < d_[j]; });
        EigenDecomposition eig;
        eig.lambda.resize(n);
        eig.q = Matrix(n, n);
        for (std::size_t k = 0; k < n; ++k) {
            eig.lambda[k] = d_[order[k]];
            eig.q(order[k], k) = 1.0;
        }
        return eig;
    }

   private:
    static std::size_t checked_dim(const std::vector<double>& d) {
        if (d.empty()) throw InvalidParameter("diagonal quadratic: needs at least one coefficient");
        for (double v : d)
            if (!std::isfinite(v)) throw NonFiniteInput("diagonal quadratic: coefficient is not finite");
        return d.size();
    }

    double do_eval(const Vector& x) const override {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += d_[i] * x[i] * x[i];
        return 0.5 * s;
    }
    Vector do_gradient(const Vector& x) const override {
        Vector g(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) g[i] = d_[i] * x[i];
        return g;
    }
    SymmetricMatrix do_hessian(const Vector& x) const override {
        (void)x;
        return SymmetricMatrix::diagonal(d_);
    }

    std::vector<double> d_;
};

// f(x) = x1^4/4 - x1^2/2 + x2^2/2: minima at (+-1, 0), strict saddle at the
// origin with curvature (-1, 1). Nonconvex but with an exactly diagonal
// Hessian everywhere, so local convergence behavior is easy to audit.
class TwoWell : public Objective {
   public:
    TwoWell() : Objective(2) {}

    std::optional<EigenDecomposition> saddle_reference() const override {
        EigenDecomposition eig;
        eig.lambda = {-1.0, 1.0};
        eig.q = Matrix::identity(2);
        return eig;
    }

   private:
    double do_eval(const Vector& x) const override {
        const double a = x[0] * x[0];
        return 0.25 * a * a - 0.5 * a + 0.5 * x[1] * x[1];
    }
    Vector do_gradient(const Vector& x) const override {
        return Vector{x[0] * x[0] * x[0] - x[0], x[1]};
    }
    SymmetricMatrix do_hessian(const Vector& x) const override {
        return SymmetricMatrix::diagonal({3.0 * x[0] * x[0] - 1.0, 1.0});
    }
};

// Low-rank matrix factorization f(U, V) = (1/2) ||U V^T - M||_F^2 over
// x = [vec(U); vec(V)] (column-major). The landscape has saddles at rank
// deficiencies and a continuum of minima under the scaling (U s, V / s).
class MatrixFactorization : public Objective {
   public:
    MatrixFactorization(Matrix target, std::size_t rank)
        : Objective(checked_dim(target, rank)),
          m_(std::move(target)),
          l_(m_.rows()),
          n_(m_.cols()),
          r_(rank) {}

    std::size_t target_rows() const noexcept { return l_; }
    std::size_t target_cols() const noexcept { return n_; }
    std::size_t rank() const noexcept { return r_; }

   private:
    static std::size_t checked_dim(const Matrix& target, std::size_t rank) {
        if (rank < 1 || rank > 3)
            throw InvalidParameter("matrix factorization: rank must lie in [1, 3]");
        if (target.rows() + target.cols() > 200)
            throw InvalidParameter("matrix factorization: rows + cols must be at most 200");
        for (std::size_t i = 0; i < target.rows(); ++i)
            for (std::size_t j = 0; j < target.cols(); ++j)
                if (!std::isfinite(target(i, j)))
                    throw NonFiniteInput("matrix factorization: target entry is not finite");
        return (target.rows() + target.cols()) * rank;
    }

    // vec(U) occupies x[0 .. l*r), vec(V) occupies x[l*r .. (l+n)*r).
    Matrix unpack_u(const Vector& x) const {
        Matrix u(l_, r_);
        for (std::size_t j = 0; j < r_; ++j)
            for (std::size_t i = 0; i < l_; ++i) u(i, j) = x[j * l_ + i];
        return u;
    }
    Matrix unpack_v(const Vector& x) const {
        Matrix v(n_, r_);
        const std::size_t off = l_ * r_;
        for (std::size_t j = 0; j < r_; ++j)
            for (std::size_t i = 0; i < n_; ++i) v(i, j) = x[off + j * n_ + i];
        return v;
    }
    Matrix residual(const Matrix& u, const Matrix& v) const {
        Matrix e = u.times(v.transposed());
        for (std::size_t i = 0; i < l_; ++i)
            for (std::size_t j = 0; j < n_; ++j) e(i, j) -= m_(i, j);
        return e;
    }

    double do_eval(const Vector& x) const override {
        const Matrix e = residual(unpack_u(x), unpack_v(x));
        double s = 0.0;
        for (std::size_t i = 0; i < l_; ++i)
            for (std::size_t j = 0; j < n_; ++j) s += e(i, j) * e(i, j);
        return 0.5 * s;
    }

    Vector do_gradient(const Vector& x) const override {
        const Matrix u = unpack_u(x);
        const Matrix v = unpack_v(x);
        const Matrix e = residual(u, v);
        const Matrix gu = e.times(v);                // dF/dU = E V
        const Matrix gv = e.transposed().times(u);   // dF/dV = E^T U
        Vector g(dim());
        for (std::size_t j = 0; j < r_; ++j)
            for (std::size_t i = 0; i < l_; ++i) g[j * l_ + i] = gu(i, j);
        const std::size_t off = l_ * r_;
        for (std::size_t j = 0; j < r_; ++j)
            for (std::size_t i = 0; i < n_; ++i) g[off + j * n_ + i] = gv(i, j);
        return g;
    }

    // Dense Gauss-Newton-plus-residual Hessian in the packed coordinates:
    //   d2F/dU dU = (V^T V) kron I_l
    //   d2F/dV dV = (U^T U) kron I_n
    //   d2F/dU(i,j) dV(a,b) = U(i,b) V(a,j) + [j == b] E(i,a)
    SymmetricMatrix do_hessian(const Vector& x) const override {
        const Matrix u = unpack_u(x);
        const Matrix v = unpack_v(x);
        const Matrix e = residual(u, v);
        const Matrix vtv = v.transposed().times(v);
        const Matrix utu = u.transposed().times(u);

        const std::size_t off = l_ * r_;
        Matrix h(dim(), dim());
        for (std::size_t j = 0; j < r_; ++j)
            for (std::size_t b = 0; b < r_; ++b) {
                const double w = vtv(j, b);
                if (w == 0.0) continue;
                for (std::size_t i = 0; i < l_; ++i) h(j * l_ + i, b * l_ + i) = w;
            }
        for (std::size_t j = 0; j < r_; ++j)
            for (std::size_t b = 0; b < r_; ++b) {
                const double w = utu(j, b);
                if (w == 0.0) continue;
                for (std::size_t i = 0; i < n_; ++i) h(off + j * n_ + i, off + b * n_ + i) = w;
            }
        for (std::size_t j = 0; j < r_; ++j)
            for (std::size_t i = 0; i < l_; ++i) {
                const std::size_t row = j * l_ + i;
                for (std::size_t b = 0; b < r_; ++b)
                    for (std::size_t a = 0; a < n_; ++a) {
                        double w = u(i, b) * v(a, j);
                        if (j == b) w += e(i, a);
                        h(row, off + b * n_ + a) = w;
                        h(off + b * n_ + a, row) = w;
                    }
            }
        return SymmetricMatrix::from_dense_lower(h);
    }

    Matrix m_;
    std::size_t l_, n_, r_;
};

// Deterministic synthetic target M = U0 V0^T with standard normal factors,
// optionally plus entrywise Gaussian noise. The factor entries are drawn
// column-major (U0 first), then noise row-major, all from one seeded stream.
inline Matrix make_rank_factor_target(std::size_t rows, std::size_t cols, std::size_t rank,
                                      std::uint64_t seed, double noise_std = 0.0) {
    if (rows == 0 || cols == 0) throw InvalidParameter("target dimensions must be at least 1");
    if (rank < 1 || rank > 3) throw InvalidParameter("target rank must lie in [1, 3]");
    if (noise_std < 0.0 || !std::isfinite(noise_std))
        throw InvalidParameter("noise standard deviation must be finite and nonnegative");
    GaussianSampler sampler(seed);
    Matrix u0(rows, rank);
    for (std::size_t j = 0; j < rank; ++j)
        for (std::size_t i = 0; i < rows; ++i) u0(i, j) = sampler.next();
    Matrix v0(cols, rank);
    for (std::size_t j = 0; j < rank; ++j)
        for (std::size_t i = 0; i < cols; ++i) v0(i, j) = sampler.next();
    Matrix m = u0.times(v0.transposed());
    if (noise_std > 0.0)
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) m(i, j) += noise_std * sampler.next();
    return m;
}

}  // namespace ncn
