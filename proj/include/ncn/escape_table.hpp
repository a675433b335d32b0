#pragma once
// Saddle-escape iteration counts on the scaled quadratic saddle, simulated
// and in closed form. One step zeroes the well-conditioned coordinate and
// multiplies the escape coordinate by a constant growth factor: 2 for the
// curvature-corrected method regardless of lambda, 1 + lambda for gradient
// descent. Escape means |x2| grows past 1 starting from gamma.

#include <cmath>
#include <cstddef>
#include <vector>

#include "ncn/errors.hpp"

namespace ncn {

struct EscapeCell {
    double lambda = 0.0;
    double gamma = 0.0;
    long long ncn_iters = 0;
    long long gd_iters = 0;
    long long ncn_closed_form = 0;
    long long gd_closed_form = 0;
};

inline long long escape_closed_form(double gamma, double growth) {
    return (long long)std::ceil(std::log(1.0 / gamma) / std::log(growth));
}

// Iterates x2 *= growth from gamma until |x2| > 1, counting steps. Cells
// whose closed form exceeds sim_cap (slow growth at tiny gamma) are reported
// analytically instead of ground out one multiply at a time.
inline long long escape_iterations(double gamma, double growth, long long sim_cap = 1000000) {
    const long long predicted = escape_closed_form(gamma, growth);
    if (predicted > sim_cap) return predicted;
    double z = gamma;
    long long iters = 0;
    while (std::abs(z) <= 1.0) {
        z *= growth;
        ++iters;
    }
    return iters;
}

inline std::vector<EscapeCell> escape_table(const std::vector<double>& lambdas,
                                            const std::vector<double>& gammas) {
    for (double lam : lambdas)
        if (!(lam > 0.0) || lam > 1.0 || !std::isfinite(lam))
            throw InvalidParameter("escape table: lambda must lie in (0, 1]");
    for (double gam : gammas)
        if (!(gam > 0.0) || !(gam < 1.0))
            throw InvalidParameter("escape table: gamma must lie in (0, 1)");

    std::vector<EscapeCell> cells;
    cells.reserve(lambdas.size() * gammas.size());
    for (double lam : lambdas)
        for (double gam : gammas) {
            EscapeCell c;
            c.lambda = lam;
            c.gamma = gam;
            c.ncn_iters = escape_iterations(gam, 2.0);
            c.gd_iters = escape_iterations(gam, 1.0 + lam);
            c.ncn_closed_form = escape_closed_form(gam, 2.0);
            c.gd_closed_form = escape_closed_form(gam, 1.0 + lam);
            cells.push_back(c);
        }
    return cells;
}

}  // namespace ncn
