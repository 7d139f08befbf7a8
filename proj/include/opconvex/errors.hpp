#pragma once

#include <stdexcept>
#include <string>

namespace opconvex {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands of incompatible dimensions, empty lists, or malformed shapes.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Input that is not Hermitian, not positive, or not a contraction.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// An eigenvalue fell outside the domain of a scalar function.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Iterative kernel failed to converge; input is numerically pathological.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

}  // namespace opconvex
