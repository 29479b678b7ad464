#pragma once

#include <stdexcept>
#include <string>

namespace toda {

/// Base class for every error thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Division by zero and friends.
struct ArithmeticError : Error {
    using Error::Error;
};

/// A specialization var := value hit a vanishing denominator.
/// `factor` carries the reduced denominator that vanished.
struct PoleError : ArithmeticError {
    PoleError(const std::string& what, std::string factor_)
        : ArithmeticError(what), factor(std::move(factor_)) {}
    std::string factor;
};

/// A Laurent expansion met a pole deeper than the caller allowed.
struct ExcessPoleError : ArithmeticError {
    using ArithmeticError::ArithmeticError;
};

/// An operation's precondition (wrong constant term, not in image, ...) failed.
struct PreconditionError : Error {
    using Error::Error;
};

/// Lattice mismatch or invalid lattice data.
struct LatticeError : Error {
    using Error::Error;
};

/// A nonzero series coefficient sits at an order the grading forbids.
struct GradingError : Error {
    using Error::Error;
};

/// A structural identity the theory guarantees failed to hold.  This is
/// never a user error: it means either a bug or a falsified assumption,
/// so callers are expected to abort loudly.
struct StructuralError : Error {
    using Error::Error;
};

/// Malformed input text (algebra files, serialized coefficients).
struct ParseError : Error {
    using Error::Error;
};

/// Bad CLI arguments or run configuration.
struct UsageError : Error {
    using Error::Error;
};

}  // namespace toda
