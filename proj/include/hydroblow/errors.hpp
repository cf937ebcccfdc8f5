// errors.hpp
// Exception types shared by the library. Each maps onto one CLI exit status.
#pragma once

#include <stdexcept>
#include <string>

namespace hydroblow {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (m <= 0, x outside [0,1], ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// An iterative solve (Newton, continued fraction) did not meet its tolerance.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Two independent evaluation routes disagree, or a certified invariant is violated.
class CertificationError : public Error {
public:
    CertificationError(std::string invariant, const std::string& what)
        : Error(invariant + ": " + what), invariant_(std::move(invariant)) {}

    const std::string& invariant() const noexcept { return invariant_; }

private:
    std::string invariant_;
};

/// Blowup-time extrapolation found no finite-time singularity in the samples.
class NoBlowupDetected : public Error {
public:
    using Error::Error;
};

/// Incompatible grids passed to a comparison.
class GridMismatch : public Error {
public:
    using Error::Error;
};

/// Non-finite values appeared in a right-hand side evaluation.
class NonFiniteState : public Error {
public:
    using Error::Error;
};

}  // namespace hydroblow
