#pragma once
// Exception taxonomy shared across the library. Every type carries a plain
// message; ParseError additionally records the 1-based line number of the
// offending input line.

#include <stdexcept>
#include <string>

namespace ncn {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A caller-supplied value violates its documented range or shape.
class InvalidParameter : public Error {
    using Error::Error;
};

// Two operands that must share a dimension do not.
class DimensionMismatch : public Error {
    using Error::Error;
};

// An input contains NaN or infinity where finite data is required.
class NonFiniteInput : public Error {
    using Error::Error;
};

// An iterative kernel exhausted its iteration budget.
class ConvergenceFailure : public Error {
    using Error::Error;
};

// The backtracking line search shrank the step below its configured floor.
class StepUnderflow : public Error {
    using Error::Error;
};

// The saddle perturbation failed to produce an acceptable draw within the
// configured number of attempts.
class ResampleCapExceeded : public Error {
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& msg, long line)
        : Error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
    long line() const noexcept { return line_; }

private:
    long line_;
};

}  // namespace ncn
