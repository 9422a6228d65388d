#pragma once

#include <stdexcept>
#include <string>

namespace magsq {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A physical parameter is outside its admissible range.
class InvalidParameter : public Error {
public:
    using Error::Error;
};

/// The drift matrix has an eigenvalue with non-negative real part.
class StabilityError : public Error {
public:
    using Error::Error;
};

/// Singular or ill-conditioned linear algebra.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Iterative procedure (fixed point, limit cycle) did not settle.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Frequency integral failed its error or truncation check.
class IntegrationError : public Error {
public:
    using Error::Error;
};

/// Fixed-step integrator disagrees with its half-step companion.
class AccuracyError : public Error {
public:
    using Error::Error;
};

/// Malformed configuration or command line.
class UsageError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    IoError(const std::string& what, std::string path)
        : Error(what + ": " + path), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

} // namespace magsq
