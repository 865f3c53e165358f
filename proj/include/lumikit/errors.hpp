#pragma once

#include <stdexcept>
#include <string>

namespace lumikit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad input: wrong shapes, out-of-range parameters, malformed files.
/// The CLI maps these to exit code 1.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A numeric argument outside the domain of a function.
class DomainError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Degenerate data (zero statistics, rank-deficient input, empty masks).
class DegenerateError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Filesystem or codec failure. The CLI maps these to exit code 2.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace lumikit
