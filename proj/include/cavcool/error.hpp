#pragma once

#include <stdexcept>
#include <string>

namespace cavcool {

/// Base class for every domain error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter violates a precondition (Delta = 0, m0 < 0, ...).
class InvalidParameter : public Error {
public:
    using Error::Error;
};

/// A closed-form expression hit a vanishing denominator.
class SingularFormula : public Error {
public:
    using Error::Error;
};

/// The drift matrix is numerically singular.
class SingularSystem : public Error {
public:
    SingularSystem(const std::string& what, double condition)
        : Error(what), condition_(condition) {}
    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

/// Rate fitting found no usable decay window.
class InsufficientDecay : public Error {
public:
    using Error::Error;
};

/// Malformed or contradictory parameter configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Truncated Fock space larger than the configured budget.
class DimensionBudgetExceeded : public Error {
public:
    DimensionBudgetExceeded(const std::string& what, long dimension)
        : Error(what), dimension_(dimension) {}
    long dimension() const noexcept { return dimension_; }

private:
    long dimension_;
};

/// Initial state does not fit the phonon cutoff.
class CutoffTooSmall : public Error {
public:
    CutoffTooSmall(const std::string& what, int required)
        : Error(what), required_(required) {}
    int required_cutoff() const noexcept { return required_; }

private:
    int required_;
};

/// Adaptive integration could not make progress.
class StiffnessError : public Error {
public:
    using Error::Error;
};

/// A density operator or model failed a structural check.
class IntegrityError : public Error {
public:
    using Error::Error;
};

}  // namespace cavcool
