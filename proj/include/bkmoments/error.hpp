#pragma once

#include <stdexcept>
#include <string>

namespace bkm {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Mismatched dimensions between polynomials, points, indices or models.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Malformed model, plan, or configuration input.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Failure of the numerical scheme itself: a (near-)singular resolvent
/// diagonal or weights exceeding the divergence guard.
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace bkm
