#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tsn {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// --- time scale construction ---

class DuplicatePoint : public Error {
public:
    using Error::Error;
};

class TooFewPoints : public Error {
public:
    using Error::Error;
};

class NonFiniteValue : public Error {
public:
    using Error::Error;
};

class NonDivisibleRange : public Error {
public:
    using Error::Error;
};

class NotStrictlyIncreasing : public Error {
public:
    using Error::Error;
};

// --- grid functions and calculus ---

class DomainMismatch : public Error {
public:
    using Error::Error;
};

class PointNotInScale : public Error {
public:
    using Error::Error;
};

class ReversedBounds : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class EmptySeries : public Error {
public:
    using Error::Error;
};

// --- expressions ---

/// Parse failure; `offset` is the 0-based byte offset into the source text.
class SyntaxError : public Error {
public:
    SyntaxError(const std::string& msg, std::size_t offset)
        : Error(msg + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

class UnknownFunction : public Error {
public:
    using Error::Error;
};

/// An identifier that is not in the allowed variable set for its role.
/// Raised by the binding check, not by the parser.
class UnknownVariable : public Error {
public:
    using Error::Error;
};

/// A variable that has no value in the evaluation environment.
class UnboundVariable : public Error {
public:
    using Error::Error;
};

/// Evaluation left the real domain (log of a non-positive value, division by
/// zero, ...). Carries the printed offending subexpression.
class NumericDomain : public Error {
public:
    NumericDomain(const std::string& what_failed, const std::string& subexpr)
        : Error(what_failed + " in '" + subexpr + "'"), subexpr_(subexpr) {}
    const std::string& subexpr() const { return subexpr_; }

private:
    std::string subexpr_;
};

// --- solvers ---

class NewtonDivergence : public Error {
public:
    NewtonDivergence(const std::string& msg, std::size_t step, double residual)
        : Error(msg), step_(step), residual_(residual) {}
    std::size_t step() const { return step_; }
    double residual() const { return residual_; }

private:
    std::size_t step_;
    double residual_;
};

class SingularJacobian : public Error {
public:
    using Error::Error;
};

// --- symmetry layer ---

/// Numeric generator extraction: central differences at steps ds and ds/2
/// disagree beyond the allowed relative tolerance.
class InconsistentRichardson : public Error {
public:
    using Error::Error;
};

/// A conserved-quantity evaluation received a solution produced by the other
/// EL variant without the explicit override.
class VariantMismatch : public Error {
public:
    using Error::Error;
};

// --- configuration and IO ---

class MissingKey : public Error {
public:
    using Error::Error;
};

class UnknownKey : public Error {
public:
    using Error::Error;
};

/// A config value that does not parse as the type its key requires.
class ConfigTypeError : public Error {
public:
    ConfigTypeError(const std::string& msg, std::size_t line)
        : Error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace tsn
