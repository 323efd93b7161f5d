#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace melosc {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& message) : std::runtime_error(message) {}
};

/// The unperturbed system for these parameters has no usable period annulus
/// (cases C2, C3, C5, C6 and the constant-half-period case C8).
class NoPeriodAnnulus : public Error {
public:
    using Error::Error;
};

/// y0 lies outside the annulus interval D_i of the current case.
class OutOfAnnulusDomain : public Error {
public:
    using Error::Error;
};

/// A time value lies outside the half-period image interval I_i.
class OutOfAnnulusImage : public Error {
public:
    using Error::Error;
};

/// sigma/2 is not admissible for the current annulus (CLI-facing wrapper).
class AdmissibilityError : public Error {
public:
    using Error::Error;
};

/// Expression text could not be parsed. Carries the byte offset of the
/// failure and a description of what was expected there.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t offset, std::string expected)
        : Error(message), offset_(offset), expected_(std::move(expected)) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::string& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::string expected_;
};

/// Expression evaluation produced a non-finite value. Carries the printed
/// form of the offending subexpression.
class EvalError : public Error {
public:
    EvalError(const std::string& message, std::string subexpression)
        : Error(message), subexpression_(std::move(subexpression)) {}

    const std::string& subexpression() const noexcept { return subexpression_; }

private:
    std::string subexpression_;
};

/// Adaptive quadrature could not reach the requested tolerance.
class QuadratureFailure : public Error {
public:
    using Error::Error;
};

/// A trajectory met the switching line with |y| below the transversality
/// tolerance; the crossing construction does not apply there.
class GrazingError : public Error {
public:
    using Error::Error;
};

/// Integration exceeded its time horizon without producing the event.
class TimeLimitExceeded : public Error {
public:
    using Error::Error;
};

/// The bracket handed to a root solve contains no sign change.
class RootBracketFailure : public Error {
public:
    using Error::Error;
};

/// Newton iteration on the displacement map failed to converge.
class NewtonDivergence : public Error {
public:
    using Error::Error;
};

/// Root bracketing precondition g(lo)*g(hi) < 0 violated.
class NoSignChange : public Error {
public:
    using Error::Error;
};

/// An iterative kernel hit its iteration cap.
class MaxIterations : public Error {
public:
    using Error::Error;
};

/// The finite-difference Jacobian is singular to working precision.
class SingularJacobian : public Error {
public:
    using Error::Error;
};

/// Input data unusable for the requested reduction (wrong size, signs, ...).
class DegenerateInput : public Error {
public:
    using Error::Error;
};

} // namespace melosc
