#pragma once
// Dense real vector. Construction validates that the dimension is at least 1
// and that every entry is finite, so downstream code can assume well-formed
// data without re-checking.

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

#include "ncn/errors.hpp"

namespace ncn {

class Vector {
public:
    // Empty placeholder; usable only after assignment from a real vector.
    Vector() = default;

    explicit Vector(std::size_t n) : v_(n, 0.0) { require_nonempty(); }

    explicit Vector(std::vector<double> data) : v_(std::move(data)) {
        require_nonempty();
        require_finite();
    }

    Vector(std::initializer_list<double> data) : v_(data) {
        require_nonempty();
        require_finite();
    }

    std::size_t size() const noexcept { return v_.size(); }
    double operator[](std::size_t i) const noexcept { return v_[i]; }
    double& operator[](std::size_t i) noexcept { return v_[i]; }
    const std::vector<double>& data() const noexcept { return v_; }

private:
    void require_nonempty() const {
        if (v_.empty()) throw InvalidParameter("vector dimension must be at least 1");
    }
    void require_finite() const {
        for (double x : v_)
            if (!std::isfinite(x)) throw NonFiniteInput("vector entry is not finite");
    }

    std::vector<double> v_;
};

inline double dot(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw DimensionMismatch("dot: vectors have different sizes");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(const Vector& a) { return std::sqrt(dot(a, a)); }

inline double max_abs(const Vector& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i]));
    return m;
}

// x + c * y
inline Vector axpy(const Vector& x, double c, const Vector& y) {
    if (x.size() != y.size()) throw DimensionMismatch("axpy: vectors have different sizes");
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + c * y[i];
    return Vector(std::move(out));
}

inline Vector operator-(const Vector& a, const Vector& b) { return axpy(a, -1.0, b); }
inline Vector operator+(const Vector& a, const Vector& b) { return axpy(a, 1.0, b); }

}  // namespace ncn
