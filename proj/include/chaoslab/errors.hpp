#pragma once

#include <stdexcept>
#include <string>

namespace chaoslab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unknown system, malformed system definition, unusable cover.
class ConfigurationError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A parameter has the wrong form (e.g. a non-dyadic shadowing radius).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// An object could not be built because its invariants do not hold.
class ConstructionError : public Error {
public:
    using Error::Error;
};

/// A hypothesis needed by a construction is not witnessed. This is a
/// legitimate negative mathematical outcome, not a malfunction.
class HypothesisError : public Error {
public:
    using Error::Error;
};

/// Internal consistency check failed. Always a bug.
class InternalError : public Error {
public:
    using Error::Error;
};

} // namespace chaoslab
