#pragma once
// Deterministic Gaussian sampling. std::mt19937_64 has a standard-specified
// output sequence, but std::normal_distribution does not, so the normal
// transform is done by hand (Box-Muller) to keep runs byte-identical across
// standard libraries.

#include <cmath>
#include <cstdint>
#include <random>

#include "ncn/errors.hpp"
#include "ncn/vector.hpp"

namespace ncn {

class GaussianSampler {
   public:
    explicit GaussianSampler(std::uint64_t seed) : eng_(seed) {}

    // Standard normal draw. Box-Muller produces pairs; the sine half is cached
    // and returned on the next call.
    double next() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        // 53-bit mantissa draws: u1 in (0, 1] so log is finite, u2 in [0, 1).
        const double u1 = (double(eng_() >> 11) + 1.0) * 0x1p-53;
        const double u2 = double(eng_() >> 11) * 0x1p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.14159265358979323846 * u2;
        cached_ = r * std::sin(angle);
        have_cached_ = true;
        return r * std::cos(angle);
    }

   private:
    std::mt19937_64 eng_;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

inline Vector random_init(std::size_t n, double std_dev, std::uint64_t seed) {
    if (n == 0) throw InvalidParameter("random_init: dimension must be at least 1");
    if (!(std_dev > 0.0) || !std::isfinite(std_dev))
        throw InvalidParameter("random_init: standard deviation must be positive and finite");
    GaussianSampler sampler(seed);
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = std_dev * sampler.next();
    return x;
}

}  // namespace ncn
