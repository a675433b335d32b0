#pragma once
// Worst-case iteration bounds and the curvature-escape probability floor.
// These are diagnostics: nothing in the optimizer loop consumes them, they
// exist so a run can be compared against what the analysis promises.

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "ncn/eigen_jacobi.hpp"
#include "ncn/errors.hpp"
#include "ncn/vector.hpp"

namespace ncn {

// Problem and algorithm constants the bounds are evaluated at. lipschitz_m
// bounds the Hessian spectral norm, lipschitz_l its Lipschitz constant.
struct TheoryConstants {
    double m = 1e-12;
    double lipschitz_m = 1.0;
    double lipschitz_l = 1.0;
    double alpha = 0.1;
    double beta = 0.9;
    double epsilon = 1e-12;
    double zeta = 0.5;      // fraction of delta used as the target radius
    double gamma_c = 0.5;   // contraction factor entering the escape phase
    double xi = std::numeric_limits<double>::infinity();  // strictness margin
    std::size_t n = 2;      // problem dimension
    double p = 0.01;        // acceptable failure probability
    double f0_gap = 1.0;    // f(x0) minus the optimal value

    void validate() const {
        if (!(m > 0.0) || !std::isfinite(m)) throw InvalidParameter("m must be positive");
        if (!(lipschitz_m > 0.0) || !std::isfinite(lipschitz_m))
            throw InvalidParameter("lipschitz_m must be positive");
        if (!(lipschitz_l > 0.0) || !std::isfinite(lipschitz_l))
            throw InvalidParameter("lipschitz_l must be positive");
        if (!(alpha > 0.0) || !(alpha < 0.5)) throw InvalidParameter("alpha must lie in (0, 0.5)");
        if (!(beta > 0.0) || !(beta < 1.0)) throw InvalidParameter("beta must lie in (0, 1)");
        if (!(epsilon > 0.0) || !std::isfinite(epsilon))
            throw InvalidParameter("epsilon must be positive");
        if (!(zeta > 0.0) || !(zeta < 1.0)) throw InvalidParameter("zeta must lie in (0, 1)");
        if (!(gamma_c > 0.0) || !(gamma_c < 1.0))
            throw InvalidParameter("gamma_c must lie in (0, 1)");
        if (!(xi > 0.0)) throw InvalidParameter("xi must be positive");
        if (n < 1) throw InvalidParameter("n must be at least 1");
        if (!(p > 0.0) || !(p < 1.0)) throw InvalidParameter("p must lie in (0, 1)");
        if (!(f0_gap > 0.0) || !std::isfinite(f0_gap))
            throw InvalidParameter("f0_gap must be positive");
    }
};

struct IterationBounds {
    double delta = 0.0;    // radius of the quadratic-convergence region
    double k1 = 0.0;       // iterations to contract within the region
    double k2 = 0.0;       // descent-phase iterations between region visits
    double k3 = 0.0;       // doublings to polish from the region edge
    double k4 = 0.0;       // iterations per stochastic escape round
    double s_max = 0.0;    // bound on the number of escape rounds
    double t_max = 0.0;    // bound on region entries per round
    double k_total = 0.0;  // assembled worst-case iteration count
    double q_lower = 0.0;  // per-draw escape probability floor
    bool m_within_xi_margin = false;  // whether m < xi / 2
};

inline double compute_delta(double m, double lipschitz_l, double alpha) {
    return std::min(m * m * (1.0 - 2.0 * alpha) / lipschitz_l, m * m / (5.0 * lipschitz_l));
}

namespace detail {

// Regularized lower incomplete gamma P(a, x), series branch (x < a + 1).
inline double lower_gamma_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 1000; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-16)
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw ConvergenceFailure("incomplete gamma: series did not converge");
}

// Complement Q(a, x) by modified Lentz continued fraction (x >= a + 1).
inline double upper_gamma_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 1000; ++i) {
        const double an = -double(i) * (double(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16)
            return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw ConvergenceFailure("incomplete gamma: continued fraction did not converge");
}

}  // namespace detail

inline double regularized_lower_gamma(double a, double x) {
    if (!(a > 0.0) || !std::isfinite(a))
        throw InvalidParameter("regularized_lower_gamma: a must be positive");
    if (x < 0.0 || !std::isfinite(x))
        throw InvalidParameter("regularized_lower_gamma: x must be finite and nonnegative");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return detail::lower_gamma_series(a, x);
    return 1.0 - detail::upper_gamma_cf(a, x);
}

// Probability that a single Gaussian perturbation lands usefully along the
// escape direction: P(|Z| > 1 for one coordinate) times the chi-squared
// median-side mass of the remaining ones. Dimension-dependent but bounded
// away from zero.
inline double compute_q_lower(std::size_t n) {
    if (n < 1) throw InvalidParameter("compute_q_lower: n must be at least 1");
    const double tail = std::erfc(1.0 / std::sqrt(2.0));
    return tail * regularized_lower_gamma(double(n) / 2.0, double(n) / 2.0);
}

inline IterationBounds compute_bounds(const TheoryConstants& c) {
    c.validate();
    const double m = c.m;
    const double bm = c.lipschitz_m;
    const double bl = c.lipschitz_l;

    IterationBounds out;
    out.delta = compute_delta(m, bl, c.alpha);
    const double r = c.zeta * out.delta;
    const double base = 2.0 - c.zeta;

    out.k1 = 1.0 + std::log(r / c.epsilon) / std::log(base);
    out.k2 = bm * bm * c.f0_gap / (c.alpha * c.beta * m * r * r);

    const double k3_arg = 2.0 * m * m / (5.0 * bl * c.epsilon);
    if (k3_arg <= 1.0)
        throw InvalidParameter("k3: 2 m^2 / (5 lipschitz_l epsilon) must exceed 1");
    out.k3 = std::log2(std::log2(k3_arg));

    out.s_max = m * m * c.f0_gap / (bm * c.alpha * c.beta * r * r);
    out.t_max = (2.0 / (c.alpha * c.beta)) * (bm / m) * (bm / m) * (bm / m) + c.alpha * c.beta;
    out.q_lower = compute_q_lower(c.n);

    const double k4_arg = 5.0 * bl * c.zeta / (m * m * c.epsilon);
    if (k4_arg <= 1.0)
        throw InvalidParameter("k4: 5 lipschitz_l zeta / (m^2 epsilon) must exceed 1");
    out.k4 = (1.0 + std::log(out.s_max / c.p) / std::log(1.0 / (1.0 - out.q_lower))) *
             (std::log2(std::log2(k4_arg)) + std::log(1.0 / c.gamma_c) / std::log(base) + 1.0);

    const double st = out.s_max * out.t_max;
    out.k_total = st * out.k1 + (st + 1.0) * out.k2 + out.k3 + out.s_max * out.k4;
    out.m_within_xi_margin = m < c.xi / 2.0;
    return out;
}

// Splits ||g|| by curvature sign in a reference eigenbasis: first component
// collects eigendirections with eigenvalue below neg_threshold, second the
// rest. Used by traces to show gradient mass draining out of descent
// directions at a saddle.
inline std::pair<double, double> grad_projections(const Vector& g, const EigenDecomposition& ref,
                                                  double neg_threshold = 0.0) {
    if (g.size() != ref.lambda.size())
        throw DimensionMismatch("grad_projections: vector size does not match basis dimension");
    const Vector y = ref.q.transpose_times(g);
    double neg = 0.0;
    double pos = 0.0;
    for (std::size_t k = 0; k < y.size(); ++k) {
        if (ref.lambda[k] < neg_threshold)
            neg += y[k] * y[k];
        else
            pos += y[k] * y[k];
    }
    return {std::sqrt(neg), std::sqrt(pos)};
}

}  // namespace ncn
