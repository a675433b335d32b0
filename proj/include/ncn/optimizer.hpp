#pragma once
// The curvature-corrected Newton step with backtracking, the full saddle
// escaping loop with Gaussian noise injection, and a gradient-descent baseline
// sharing the same line search. Every run produces a structured trace.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ncn/eigen_jacobi.hpp"
#include "ncn/errors.hpp"
#include "ncn/objective.hpp"
#include "ncn/pt_inverse.hpp"
#include "ncn/rng.hpp"
#include "ncn/theory.hpp"
#include "ncn/vector.hpp"

namespace ncn {

struct OptimizerConfig {
    double alpha = 0.1;    // Armijo slope fraction
    double beta = 0.9;     // backtracking shrink factor
    double epsilon = 1e-12;  // target gradient-norm accuracy
    double m = 1e-12;      // eigenvalue truncation floor
    double lipschitz_m = 1.0;  // Hessian spectral-norm bound, noise gate only
    double lipschitz_l = 1.0;  // Hessian Lipschitz constant, diagnostic only
    std::size_t max_outer_iters = 1000;
    std::size_t max_resample_draws = 1000;
    double min_step = 1e-16;  // backtracking floor before giving up
    std::uint64_t seed = 0;

    void validate() const {
        if (!(alpha > 0.0) || !(alpha < 0.5))
            throw InvalidParameter("alpha must lie in (0, 0.5)");
        if (!(beta > 0.0) || !(beta < 1.0)) throw InvalidParameter("beta must lie in (0, 1)");
        if (!(epsilon > 0.0) || !std::isfinite(epsilon))
            throw InvalidParameter("epsilon must be positive");
        if (!(m > 0.0) || !std::isfinite(m)) throw InvalidParameter("m must be positive");
        if (!(lipschitz_m > 0.0) || !std::isfinite(lipschitz_m))
            throw InvalidParameter("lipschitz_m must be positive");
        if (lipschitz_l < 0.0 || !std::isfinite(lipschitz_l))
            throw InvalidParameter("lipschitz_l must be finite and nonnegative");
        if (max_outer_iters < 1) throw InvalidParameter("max_outer_iters must be at least 1");
        if (max_resample_draws < 1)
            throw InvalidParameter("max_resample_draws must be at least 1");
        if (!(min_step > 0.0) || !std::isfinite(min_step))
            throw InvalidParameter("min_step must be positive");
    }
};

// One row of a run trace. The record describes the iterate x_k itself
// (f_value, grad_norm, min_hess_eig, projection norms are all evaluated at
// x_k) while step_size and n_backtracks describe the accepted step that
// produced x_k. Record 0 is the starting point with step_size 1 and no
// backtracks. noise_injected means x_k includes an accepted perturbation, and
// n_noise_draws counts every draw made there including the accepted one.
struct IterationRecord {
    std::size_t k = 0;
    double f_value = 0.0;
    double grad_norm = 0.0;
    double min_hess_eig = 0.0;
    double step_size = 1.0;
    std::size_t n_backtracks = 0;
    bool noise_injected = false;
    std::size_t n_noise_draws = 0;
    double neg_proj_norm = 0.0;
    double pos_proj_norm = 0.0;
};

enum class Termination { Converged, MaxIters, StepUnderflow, ResampleCapExceeded };

inline const char* to_string(Termination t) {
    switch (t) {
        case Termination::Converged: return "converged";
        case Termination::MaxIters: return "max_iters";
        case Termination::StepUnderflow: return "step_underflow";
        case Termination::ResampleCapExceeded: return "resample_cap_exceeded";
    }
    return "unknown";
}

struct RunTrace {
    std::vector<IterationRecord> records;
    Termination termination = Termination::MaxIters;
    Vector final_x;
    // One stored point per record, so any accepted step can be re-verified
    // against the Armijo inequality after the fact.
    std::vector<Vector> iterates;
    // Which eigenbasis the projection norms use: the problem's analytic
    // saddle decomposition when it has one, otherwise each iterate's own.
    std::string projection_basis;
};

struct StepResult {
    Vector x_next;
    IterationRecord record;
};

namespace detail {

// Eigenvalues this far below zero count as genuine negative curvature; closer
// to zero is treated as converged-flat to absorb eigensolver rounding.
inline constexpr double kNegativeCurvatureTol = -1e-12;

struct EvalState {
    double f = 0.0;
    Vector g;
    EigenDecomposition eig;
};

inline EvalState evaluate_state(const Objective& obj, const Vector& x) {
    EvalState s;
    s.f = obj.eval(x);
    s.g = obj.gradient(x);
    s.eig = jacobi_eigendecompose(obj.hessian(x));
    return s;
}

struct LineSearchResult {
    Vector x;
    double f = 0.0;
    double step_size = 1.0;
    std::size_t n_backtracks = 0;
};

// Backtracking line search along -dir: eta starts at 1 and shrinks by beta
// until f(x - eta dir) <= f(x) - alpha eta decrement with a finite value.
// decrement is the directional decrease certificate (g^T Hm^{-1} g for the
// Newton-type step, ||g||^2 for gradient descent) and is nonnegative.
inline LineSearchResult armijo_backtrack(const Objective& obj, const Vector& x, double fx,
                                         const Vector& dir, double decrement,
                                         const OptimizerConfig& cfg) {
    double eta = 1.0;
    LineSearchResult out;
    while (true) {
        Vector trial = axpy(x, -eta, dir);
        const double ft = obj.eval(trial);
        if (std::isfinite(ft) && ft <= fx - cfg.alpha * eta * decrement) {
            out.x = std::move(trial);
            out.f = ft;
            out.step_size = eta;
            return out;
        }
        eta *= cfg.beta;
        ++out.n_backtracks;
        if (eta < cfg.min_step)
            throw StepUnderflow("line search: step size fell below min_step");
    }
}

inline void fill_record(IterationRecord& rec, const EvalState& s,
                        const std::optional<EigenDecomposition>& ref) {
    rec.f_value = s.f;
    rec.grad_norm = norm(s.g);
    rec.min_hess_eig = s.eig.lambda.front();
    const auto proj = grad_projections(s.g, ref ? *ref : s.eig);
    rec.neg_proj_norm = proj.first;
    rec.pos_proj_norm = proj.second;
}

// One Newton-type step from an already evaluated point. Returns the accepted
// point, its evaluated state, and a record with the step fields set (the k
// and noise fields are the caller's).
inline std::pair<EvalState, IterationRecord> ncn_step_from(const Objective& obj, const Vector& x,
                                                           const EvalState& cur,
                                                           const OptimizerConfig& cfg,
                                                           const std::optional<EigenDecomposition>& ref,
                                                           Vector& x_out) {
    const PTInverse pti = pt_inverse(cur.eig, cfg.m);
    const Vector dir = pt_apply(pti, cur.g);
    const double decrement = quadratic_form(pti, cur.g);
    LineSearchResult ls = armijo_backtrack(obj, x, cur.f, dir, decrement, cfg);

    EvalState next;
    next.f = ls.f;
    next.g = obj.gradient(ls.x);
    next.eig = jacobi_eigendecompose(obj.hessian(ls.x));

    IterationRecord rec;
    rec.step_size = ls.step_size;
    rec.n_backtracks = ls.n_backtracks;
    fill_record(rec, next, ref);
    x_out = std::move(ls.x);
    return {std::move(next), rec};
}

inline std::pair<EvalState, IterationRecord> gd_step_from(const Objective& obj, const Vector& x,
                                                          const EvalState& cur,
                                                          const OptimizerConfig& cfg,
                                                          const std::optional<EigenDecomposition>& ref,
                                                          Vector& x_out) {
    const double decrement = dot(cur.g, cur.g);
    LineSearchResult ls = armijo_backtrack(obj, x, cur.f, cur.g, decrement, cfg);

    EvalState next;
    next.f = ls.f;
    next.g = obj.gradient(ls.x);
    // The baseline never uses curvature; the factorization here exists purely
    // so its trace rows carry the same diagnostics as the Newton-type run.
    next.eig = jacobi_eigendecompose(obj.hessian(ls.x));

    IterationRecord rec;
    rec.step_size = ls.step_size;
    rec.n_backtracks = ls.n_backtracks;
    fill_record(rec, next, ref);
    x_out = std::move(ls.x);
    return {std::move(next), rec};
}

}  // namespace detail

inline StepResult ncn_step(const Vector& x, const Objective& obj, const OptimizerConfig& cfg) {
    cfg.validate();
    const auto ref = obj.saddle_reference();
    const detail::EvalState cur = detail::evaluate_state(obj, x);
    StepResult out;
    auto [next, rec] = detail::ncn_step_from(obj, x, cur, cfg, ref, out.x_next);
    rec.k = 1;
    out.record = rec;
    return out;
}

inline StepResult gd_step(const Vector& x, const Objective& obj, const OptimizerConfig& cfg) {
    cfg.validate();
    const auto ref = obj.saddle_reference();
    const detail::EvalState cur = detail::evaluate_state(obj, x);
    StepResult out;
    auto [next, rec] = detail::gd_step_from(obj, x, cur, cfg, ref, out.x_next);
    rec.k = 1;
    out.record = rec;
    return out;
}

// Full saddle-escaping loop: Newton-type steps until the gradient is small
// AND the Hessian is (numerically) positive semidefinite. Whenever a step
// lands at a small-gradient point that still has negative curvature, a
// Gaussian perturbation with per-coordinate standard deviation 2 epsilon / m
// is added, redrawn from the same base point until the perturbed gradient is
// below (2 sqrt(n) M / m + 1) epsilon, and the loop then takes 2 unconditional
// steps before re-testing.
inline RunTrace ncn_run(const Vector& x0, const Objective& obj, const OptimizerConfig& cfg) {
    cfg.validate();
    const auto ref = obj.saddle_reference();
    const std::size_t n = obj.dim();
    GaussianSampler sampler(cfg.seed);
    const double noise_std = 2.0 * cfg.epsilon / cfg.m;
    const double accept_bound =
        (2.0 * std::sqrt(double(n)) * cfg.lipschitz_m / cfg.m + 1.0) * cfg.epsilon;

    RunTrace trace;
    trace.projection_basis = ref ? "analytic_saddle" : "iterate_hessian";

    Vector x = x0;
    detail::EvalState cur = detail::evaluate_state(obj, x);

    IterationRecord rec0;
    detail::fill_record(rec0, cur, ref);
    trace.records.push_back(rec0);
    trace.iterates.push_back(x);

    while (true) {
        const bool grad_small = norm(cur.g) <= cfg.epsilon;
        const bool curvature_ok = cur.eig.lambda.front() >= detail::kNegativeCurvatureTol;
        if (grad_small && curvature_ok) {
            trace.termination = Termination::Converged;
            break;
        }
        if (trace.records.size() - 1 >= cfg.max_outer_iters) {
            trace.termination = Termination::MaxIters;
            break;
        }

        Vector x_next;
        detail::EvalState next;
        IterationRecord rec;
        try {
            std::tie(next, rec) = detail::ncn_step_from(obj, x, cur, cfg, ref, x_next);
        } catch (const StepUnderflow&) {
            trace.termination = Termination::StepUnderflow;
            break;
        }
        rec.k = trace.records.size();

        // Noise branch: small gradient but negative curvature at the new
        // point. The perturbation is folded into this same record.
        if (norm(next.g) <= cfg.epsilon &&
            next.eig.lambda.front() < detail::kNegativeCurvatureTol) {
            const Vector base = x_next;
            std::size_t draws = 0;
            bool accepted = false;
            Vector cand;
            while (draws < cfg.max_resample_draws) {
                cand = base;
                for (std::size_t i = 0; i < n; ++i) cand[i] += noise_std * sampler.next();
                ++draws;
                if (norm(obj.gradient(cand)) <= accept_bound) {
                    accepted = true;
                    break;
                }
            }
            if (!accepted) {
                rec.n_noise_draws = draws;
                trace.records.push_back(rec);
                trace.iterates.push_back(x_next);
                trace.final_x = x_next;
                trace.termination = Termination::ResampleCapExceeded;
                return trace;
            }
            x_next = cand;
            next = detail::evaluate_state(obj, x_next);
            detail::fill_record(rec, next, ref);
            rec.noise_injected = true;
            rec.n_noise_draws = draws;
            trace.records.push_back(rec);
            trace.iterates.push_back(x_next);
            x = std::move(x_next);
            cur = std::move(next);

            // After an accepted draw that keeps the gradient small, take two
            // unconditional steps so the escape direction can amplify before
            // the stopping test runs again.
            if (norm(cur.g) <= cfg.epsilon) {
                bool underflow = false;
                for (int forced = 0; forced < 2; ++forced) {
                    Vector xf;
                    detail::EvalState nf;
                    IterationRecord rf;
                    try {
                        std::tie(nf, rf) = detail::ncn_step_from(obj, x, cur, cfg, ref, xf);
                    } catch (const StepUnderflow&) {
                        underflow = true;
                        break;
                    }
                    rf.k = trace.records.size();
                    trace.records.push_back(rf);
                    trace.iterates.push_back(xf);
                    x = std::move(xf);
                    cur = std::move(nf);
                }
                if (underflow) {
                    trace.termination = Termination::StepUnderflow;
                    break;
                }
            }
            continue;
        }

        trace.records.push_back(rec);
        trace.iterates.push_back(x_next);
        x = std::move(x_next);
        cur = std::move(next);
    }

    trace.final_x = x;
    return trace;
}

// Gradient-descent baseline with the same line search and trace format. No
// noise branch: the stopping test is gradient-norm only, so an exact saddle
// is a fixed point by design.
inline RunTrace gd_run(const Vector& x0, const Objective& obj, const OptimizerConfig& cfg) {
    cfg.validate();
    const auto ref = obj.saddle_reference();

    RunTrace trace;
    trace.projection_basis = ref ? "analytic_saddle" : "iterate_hessian";

    Vector x = x0;
    detail::EvalState cur = detail::evaluate_state(obj, x);

    IterationRecord rec0;
    detail::fill_record(rec0, cur, ref);
    trace.records.push_back(rec0);
    trace.iterates.push_back(x);

    while (true) {
        if (norm(cur.g) <= cfg.epsilon) {
            trace.termination = Termination::Converged;
            break;
        }
        if (trace.records.size() - 1 >= cfg.max_outer_iters) {
            trace.termination = Termination::MaxIters;
            break;
        }

        Vector x_next;
        detail::EvalState next;
        IterationRecord rec;
        try {
            std::tie(next, rec) = detail::gd_step_from(obj, x, cur, cfg, ref, x_next);
        } catch (const StepUnderflow&) {
            trace.termination = Termination::StepUnderflow;
            break;
        }
        rec.k = trace.records.size();
        trace.records.push_back(rec);
        trace.iterates.push_back(x_next);
        x = std::move(x_next);
        cur = std::move(next);
    }

    trace.final_x = x;
    return trace;
}

// Crude Lipschitz estimates used by the command-line driver when the problem
// has no analytic constants: M doubles the largest Hessian eigenvalue
// magnitude at x0, L doubles the steepest finite-difference Hessian variation
// over 10 seeded random pairs near x0. These feed the noise acceptance bound
// and diagnostics only, never the step itself.
struct LipschitzEstimate {
    double lipschitz_m = 1.0;
    double lipschitz_l = 1.0;
};

inline LipschitzEstimate estimate_lipschitz(const Objective& obj, const Vector& x0,
                                            std::uint64_t seed) {
    LipschitzEstimate out;
    const EigenDecomposition eig0 = jacobi_eigendecompose(obj.hessian(x0));
    const double spec0 =
        std::max(std::abs(eig0.lambda.front()), std::abs(eig0.lambda.back()));
    out.lipschitz_m = spec0 > 0.0 ? 2.0 * spec0 : 1.0;

    const std::size_t n = obj.dim();
    const double scale = 0.1 * (1.0 + norm(x0) / std::sqrt(double(n)));
    GaussianSampler sampler(seed);
    double worst = 0.0;
    for (int pair = 0; pair < 10; ++pair) {
        Vector xa = x0;
        Vector xb = x0;
        for (std::size_t i = 0; i < n; ++i) xa[i] += scale * sampler.next();
        for (std::size_t i = 0; i < n; ++i) xb[i] += scale * sampler.next();
        const SymmetricMatrix ha = obj.hessian(xa);
        const SymmetricMatrix hb = obj.hessian(xb);
        SymmetricMatrix diff(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j <= i; ++j) diff.set(i, j, ha(i, j) - hb(i, j));
        const EigenDecomposition deig = jacobi_eigendecompose(diff);
        const double dnorm =
            std::max(std::abs(deig.lambda.front()), std::abs(deig.lambda.back()));
        const double dist = norm(xa - xb);
        if (dist > 0.0) worst = std::max(worst, dnorm / dist);
    }
    out.lipschitz_l = 2.0 * worst;
    return out;
}

}  // namespace ncn
