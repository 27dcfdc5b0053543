#pragma once

#include <stdexcept>
#include <string>

namespace resonance {

/// Root of every error raised by the library. The CLI maps the subclasses
/// onto exit codes: validation-type errors exit 2, resource and iteration
/// failures exit 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input outside an operation's precondition.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A resonator table could not be built (e.g. empty prime window).
class ConstructionError : public Error {
public:
    using Error::Error;
};

/// Work or memory would exceed a configured budget.
class ResourceError : public Error {
public:
    using Error::Error;
};

/// An iterative method failed to converge.
class IterationError : public Error {
public:
    using Error::Error;
};

/// Requested accuracy is out of reach in double precision.
class PrecisionError : public Error {
public:
    using Error::Error;
};

} // namespace resonance
