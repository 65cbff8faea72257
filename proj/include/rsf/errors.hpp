#pragma once

#include <stdexcept>
#include <string>

namespace rsf {

// Base for every numerical failure raised by the solvers.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NonConvergence : public SolverError {
public:
    NonConvergence(const std::string& what, double residual, int iterations)
        : SolverError(what + " (residual " + std::to_string(residual) + " after " +
                      std::to_string(iterations) + " iterations)"),
          residual_(residual), iterations_(iterations) {}
    double residual() const noexcept { return residual_; }
    int iterations() const noexcept { return iterations_; }

private:
    double residual_;
    int iterations_;
};

class StabilityRefused : public SolverError {
public:
    using SolverError::SolverError;
};

class StickBranch : public SolverError {
public:
    using SolverError::SolverError;
};

class BracketFailure : public SolverError {
public:
    using SolverError::SolverError;
};

// Raised when the effective friction is not decreasing-then-increasing.
// [lo, hi] is the first scan interval where the expected monotonicity breaks.
class ShapeViolation : public SolverError {
public:
    ShapeViolation(const std::string& what, double lo, double hi)
        : SolverError(what), lo_(lo), hi_(hi) {}
    double interval_lo() const noexcept { return lo_; }
    double interval_hi() const noexcept { return hi_; }

private:
    double lo_, hi_;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace rsf
