#pragma once
// Objective interface plus finite-difference certification. Problems override
// the do_* hooks; the public entry points validate dimensions once so the
// hooks can assume a well-formed point.

#include <cmath>
#include <cstddef>
#include <optional>

#include "ncn/eigen_jacobi.hpp"
#include "ncn/errors.hpp"
#include "ncn/matrix.hpp"
#include "ncn/vector.hpp"

namespace ncn {

class Objective {
   public:
    virtual ~Objective() = default;

    std::size_t dim() const noexcept { return n_; }

    double eval(const Vector& x) const {
        check(x);
        return do_eval(x);
    }
    Vector gradient(const Vector& x) const {
        check(x);
        return do_gradient(x);
    }
    SymmetricMatrix hessian(const Vector& x) const {
        check(x);
        return do_hessian(x);
    }

    // Problems with a known saddle can expose its Hessian eigenstructure so
    // traces can project gradients onto a fixed analytic basis. Default: none.
    virtual std::optional<EigenDecomposition> saddle_reference() const { return std::nullopt; }

   protected:
    explicit Objective(std::size_t n) : n_(n) {
        if (n == 0) throw InvalidParameter("objective dimension must be at least 1");
    }

   private:
    void check(const Vector& x) const {
        if (x.size() != n_)
            throw DimensionMismatch("objective: point size does not match problem dimension");
    }

    virtual double do_eval(const Vector& x) const = 0;
    virtual Vector do_gradient(const Vector& x) const = 0;
    virtual SymmetricMatrix do_hessian(const Vector& x) const = 0;

    std::size_t n_;
};

// Max-norm errors of the analytic gradient against central differences of f,
// and of the analytic Hessian against central differences of the gradient.
struct FiniteDifferenceReport {
    double grad_error = 0.0;
    double hess_error = 0.0;
};

inline FiniteDifferenceReport finite_difference_check(const Objective& f, const Vector& x,
                                                      double h) {
    if (!(h > 0.0) || !std::isfinite(h))
        throw InvalidParameter("finite_difference_check: step h must be positive and finite");
    const std::size_t n = f.dim();
    FiniteDifferenceReport report;

    const Vector g = f.gradient(x);
    const SymmetricMatrix hess = f.hessian(x);

    Vector xp = x;
    Vector xm = x;
    for (std::size_t i = 0; i < n; ++i) {
        xp[i] = x[i] + h;
        xm[i] = x[i] - h;
        const double gi = (f.eval(xp) - f.eval(xm)) / (2.0 * h);
        report.grad_error = std::max(report.grad_error, std::abs(gi - g[i]));

        const Vector gp = f.gradient(xp);
        const Vector gm = f.gradient(xm);
        for (std::size_t j = 0; j < n; ++j) {
            const double hij = (gp[j] - gm[j]) / (2.0 * h);
            report.hess_error = std::max(report.hess_error, std::abs(hij - hess(i, j)));
        }
        xp[i] = x[i];
        xm[i] = x[i];
    }
    return report;
}

}  // namespace ncn
