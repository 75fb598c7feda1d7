#pragma once

#include <stdexcept>
#include <string>

namespace sievelab {

// Argument outside the mathematical domain of a formula (|alpha| >= 1, sin(theta) = 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Parameter outside a model's admissible range. Carries the violated bound.
class RangeError : public std::out_of_range {
public:
    RangeError(const std::string& what, double bound)
        : std::out_of_range(what), bound_(bound) {}

    [[nodiscard]] double bound() const noexcept { return bound_; }

private:
    double bound_;
};

// Inconsistent construction parameters (e.g. block count not dividing the dimension).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Desk-scale guard exceeded.
class SizeError : public std::length_error {
public:
    using std::length_error::length_error;
};

// Sampling from an empty candidate set.
class EmptySetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Optimizer gave up; the best point seen is kept for diagnostics.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double best_alpha, double best_beta, double best_value)
        : std::runtime_error(what), alpha(best_alpha), beta(best_beta), value(best_value) {}

    double alpha;
    double beta;
    double value;
};

}  // namespace sievelab
