#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Dense>

#include "ncn/eigen_jacobi.hpp"
#include "ncn/errors.hpp"
#include "ncn/matrix.hpp"
#include "ncn/pt_inverse.hpp"
#include "ncn/rng.hpp"
#include "ncn/vector.hpp"

using namespace ncn;

namespace {

SymmetricMatrix random_symmetric(std::size_t n, std::uint64_t seed) {
    GaussianSampler sampler(seed);
    SymmetricMatrix a(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) a.set(i, j, sampler.next());
    return a;
}

Matrix reconstruct(const EigenDecomposition& eig) {
    const std::size_t n = eig.lambda.size();
    Matrix scaled = eig.q;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) scaled(i, k) *= eig.lambda[k];
    return scaled.times(eig.q.transposed());
}

}  // namespace

TEST_CASE("vector construction validates size and finiteness") {
    CHECK_THROWS_AS(Vector(std::vector<double>{}), InvalidParameter);
    CHECK_THROWS_AS((Vector{1.0, std::numeric_limits<double>::quiet_NaN()}), NonFiniteInput);
    CHECK_THROWS_AS(Vector{std::numeric_limits<double>::infinity()}, NonFiniteInput);
    Vector z(3);
    CHECK(z.size() == 3);
    CHECK(z[0] == 0.0);
    CHECK(z[2] == 0.0);
}

TEST_CASE("vector algebra") {
    const Vector a{1.0, 2.0, 3.0};
    const Vector b{-1.0, 0.5, 2.0};
    CHECK(dot(a, b) == 6.0);
    CHECK(norm(Vector{3.0, 4.0}) == 5.0);
    CHECK(max_abs(Vector{-7.0, 2.0}) == 7.0);
    const Vector c = axpy(a, 2.0, b);
    CHECK(c[0] == -1.0);
    CHECK(c[1] == 3.0);
    CHECK(c[2] == 7.0);
    const Vector d = a - b;
    CHECK(d[0] == 2.0);
    CHECK(d[1] == 1.5);
    CHECK(d[2] == 1.0);
    CHECK_THROWS_AS(dot(a, Vector{1.0}), DimensionMismatch);
}

TEST_CASE("dense matrix products") {
    Matrix a(2, 3);
    a(0, 0) = 1.0; a(0, 1) = 2.0; a(0, 2) = 3.0;
    a(1, 0) = 4.0; a(1, 1) = 5.0; a(1, 2) = 6.0;
    const Vector x{1.0, -1.0, 2.0};
    const Vector ax = a.times(x);
    CHECK(ax[0] == 5.0);
    CHECK(ax[1] == 11.0);

    const Vector y{1.0, 2.0};
    const Vector aty = a.transpose_times(y);
    CHECK(aty[0] == 9.0);
    CHECK(aty[1] == 12.0);
    CHECK(aty[2] == 15.0);

    const Matrix aat = a.times(a.transposed());
    CHECK(aat(0, 0) == 14.0);
    CHECK(aat(0, 1) == 32.0);
    CHECK(aat(1, 0) == 32.0);
    CHECK(aat(1, 1) == 77.0);

    CHECK(Matrix::identity(3)(1, 1) == 1.0);
    CHECK(Matrix::identity(3)(0, 1) == 0.0);
    CHECK_THROWS_AS(Matrix(0, 3), InvalidParameter);
    CHECK_THROWS_AS(a.times(Vector{1.0, 2.0}), DimensionMismatch);
}

TEST_CASE("symmetric matrix storage resolves both triangles") {
    SymmetricMatrix s(3);
    s.set(1, 0, 4.0);
    s.set(2, 2, -1.0);
    CHECK(s(0, 1) == 4.0);
    CHECK(s(1, 0) == 4.0);
    CHECK(s(2, 2) == -1.0);
    CHECK_THROWS_AS(s.set(0, 0, std::numeric_limits<double>::quiet_NaN()), NonFiniteInput);

    const SymmetricMatrix d = SymmetricMatrix::diagonal({2.0, -3.0});
    CHECK(d(0, 0) == 2.0);
    CHECK(d(1, 1) == -3.0);
    CHECK(d(0, 1) == 0.0);

    // frobenius: [[1,2],[2,3]] -> sqrt(1 + 4 + 4 + 9)
    SymmetricMatrix f(2);
    f.set(0, 0, 1.0);
    f.set(1, 0, 2.0);
    f.set(1, 1, 3.0);
    CHECK(f.frobenius_norm() == Catch::Approx(std::sqrt(18.0)).epsilon(1e-15));
    CHECK(f.max_abs() == 3.0);

    Matrix dense(2, 2);
    dense(0, 0) = 1.0;
    dense(1, 0) = 5.0;
    dense(0, 1) = 99.0;  // upper triangle must be ignored
    dense(1, 1) = 2.0;
    const SymmetricMatrix g = SymmetricMatrix::from_dense_lower(dense);
    CHECK(g(0, 1) == 5.0);
    CHECK(g(1, 0) == 5.0);
}

TEST_CASE("jacobi solves 2x2 spectra exactly") {
    SymmetricMatrix a(2);
    a.set(0, 0, 2.0);
    a.set(1, 0, 1.0);
    a.set(1, 1, 2.0);
    const EigenDecomposition eig = jacobi_eigendecompose(a);
    CHECK(eig.lambda[0] == Catch::Approx(1.0).margin(1e-14));
    CHECK(eig.lambda[1] == Catch::Approx(3.0).margin(1e-14));
    // eigenvector for 3 is (1,1)/sqrt(2) up to sign
    CHECK(std::abs(eig.q(0, 1)) == Catch::Approx(std::sqrt(0.5)).margin(1e-14));
    CHECK(eig.q(0, 1) == Catch::Approx(eig.q(1, 1)).margin(1e-14));

    SymmetricMatrix b(2);
    b.set(1, 0, 1.0);
    const EigenDecomposition flip = jacobi_eigendecompose(b);
    CHECK(flip.lambda[0] == Catch::Approx(-1.0).margin(1e-14));
    CHECK(flip.lambda[1] == Catch::Approx(1.0).margin(1e-14));
}

TEST_CASE("jacobi is exact on diagonal input") {
    const EigenDecomposition eig =
        jacobi_eigendecompose(SymmetricMatrix::diagonal({3.0, -1.0, 2.0}));
    REQUIRE(eig.lambda.size() == 3);
    CHECK(eig.lambda[0] == -1.0);
    CHECK(eig.lambda[1] == 2.0);
    CHECK(eig.lambda[2] == 3.0);
    // no rotations happen, so q is an exact permutation
    CHECK(eig.q(1, 0) == 1.0);
    CHECK(eig.q(2, 1) == 1.0);
    CHECK(eig.q(0, 2) == 1.0);
    CHECK(eig.q(0, 0) == 0.0);

    const EigenDecomposition id = jacobi_eigendecompose(SymmetricMatrix::diagonal({1.0, 1.0}));
    CHECK(id.lambda[0] == 1.0);
    CHECK(id.lambda[1] == 1.0);
    CHECK(id.q(0, 0) == 1.0);  // stable sort keeps tied columns in place
    CHECK(id.q(1, 1) == 1.0);
}

TEST_CASE("jacobi reconstructs random symmetric matrices") {
    for (std::size_t n : {2u, 5u, 10u, 20u}) {
        const SymmetricMatrix a = random_symmetric(n, 100 + n);
        const EigenDecomposition eig = jacobi_eigendecompose(a);

        for (std::size_t k = 0; k + 1 < n; ++k) CHECK(eig.lambda[k] <= eig.lambda[k + 1]);

        const Matrix rec = reconstruct(eig);
        double scale = a.frobenius_norm();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                CHECK(rec(i, j) == Catch::Approx(a(i, j)).margin(1e-10 * scale));

        const Matrix qtq = eig.q.transposed().times(eig.q);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                CHECK(qtq(i, j) == Catch::Approx(i == j ? 1.0 : 0.0).margin(1e-12));
    }
}

TEST_CASE("jacobi eigenvalues agree with an independent dense solver") {
    for (std::size_t n : {3u, 7u, 15u}) {
        const SymmetricMatrix a = random_symmetric(n, 500 + n);
        const EigenDecomposition eig = jacobi_eigendecompose(a);

        Eigen::MatrixXd dense(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) dense(long(i), long(j)) = a(i, j);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> oracle(dense);
        REQUIRE(oracle.info() == Eigen::Success);

        const double scale = a.frobenius_norm();
        for (std::size_t k = 0; k < n; ++k)
            CHECK(eig.lambda[k] ==
                  Catch::Approx(oracle.eigenvalues()[long(k)]).margin(1e-10 * scale));
    }
}

TEST_CASE("pt inverse flips and truncates eigenvalues") {
    EigenDecomposition eig;
    eig.q = Matrix::identity(3);
    eig.lambda = {5.0, -0.5, 1e-15};
    const PTInverse pti = pt_inverse(eig, 1e-3);
    CHECK(pti.inv_abs_lambda[0] == 0.2);
    CHECK(pti.inv_abs_lambda[1] == 2.0);
    CHECK(pti.inv_abs_lambda[2] == 1000.0);

    CHECK_THROWS_AS(pt_inverse(eig, 0.0), InvalidParameter);
    CHECK_THROWS_AS(pt_inverse(eig, -1.0), InvalidParameter);
    CHECK_THROWS_AS(pt_inverse(eig, std::numeric_limits<double>::quiet_NaN()), InvalidParameter);
}

TEST_CASE("pt apply inverts the sign of negative curvature") {
    // H = diag(1, -0.1): the operator acts as diag(1, 10) on gradients.
    const EigenDecomposition eig =
        jacobi_eigendecompose(SymmetricMatrix::diagonal({1.0, -0.1}));
    const PTInverse pti = pt_inverse(eig, 1e-6);

    const Vector g{0.3, -0.001};
    const Vector applied = pt_apply(pti, g);
    CHECK(applied[0] == Catch::Approx(0.3).epsilon(1e-15));
    CHECK(applied[1] == Catch::Approx(-0.01).epsilon(1e-15));

    CHECK(quadratic_form(pti, g) == Catch::Approx(0.09001).epsilon(1e-15));
    CHECK_THROWS_AS(pt_apply(pti, Vector{1.0}), DimensionMismatch);
    CHECK_THROWS_AS(quadratic_form(pti, Vector{1.0, 2.0, 3.0}), DimensionMismatch);
}

TEST_CASE("pt inverse equals the true inverse on well conditioned spd input") {
    const SymmetricMatrix a = [] {
        SymmetricMatrix s(2);
        s.set(0, 0, 4.0);
        s.set(1, 0, 1.0);
        s.set(1, 1, 3.0);
        return s;
    }();
    const PTInverse pti = pt_inverse(jacobi_eigendecompose(a), 1e-8);
    const Vector g{1.0, 2.0};
    const Vector sol = pt_apply(pti, g);
    // A sol should reproduce g
    CHECK(a(0, 0) * sol[0] + a(0, 1) * sol[1] == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(a(1, 0) * sol[0] + a(1, 1) * sol[1] == Catch::Approx(2.0).epsilon(1e-12));
    // quadratic form is nonnegative and symmetric in its construction
    CHECK(quadratic_form(pti, g) > 0.0);
}

TEST_CASE("gaussian sampler is deterministic and matches its documented transform") {
    GaussianSampler a(42);
    GaussianSampler b(42);
    GaussianSampler c(43);
    bool all_equal = true;
    bool any_differ = false;
    for (int i = 0; i < 100; ++i) {
        const double va = a.next();
        if (va != b.next()) all_equal = false;
        if (va != c.next()) any_differ = true;
    }
    CHECK(all_equal);
    CHECK(any_differ);

    // re-derive the first pair straight from the engine
    std::mt19937_64 eng(42);
    const double u1 = (double(eng() >> 11) + 1.0) * 0x1p-53;
    const double u2 = double(eng() >> 11) * 0x1p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    GaussianSampler fresh(42);
    CHECK(fresh.next() == r * std::cos(angle));
    CHECK(fresh.next() == r * std::sin(angle));
}

TEST_CASE("gaussian sampler has standard-normal moments") {
    GaussianSampler sampler(7);
    const int n = 20000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double v = sampler.next();
        sum += v;
        sumsq += v * v;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    CHECK(std::abs(mean) < 0.05);
    CHECK(var == Catch::Approx(1.0).margin(0.05));
}

TEST_CASE("random init scales and validates") {
    const Vector x = random_init(5, 2.0, 11);
    CHECK(x.size() == 5);
    const Vector y = random_init(5, 1.0, 11);
    for (std::size_t i = 0; i < 5; ++i) CHECK(x[i] == 2.0 * y[i]);
    CHECK_THROWS_AS(random_init(0, 1.0, 1), InvalidParameter);
    CHECK_THROWS_AS(random_init(3, 0.0, 1), InvalidParameter);
    CHECK_THROWS_AS(random_init(3, -2.0, 1), InvalidParameter);
}
