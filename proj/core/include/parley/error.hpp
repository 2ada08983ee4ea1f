#pragma once

#include <stdexcept>
#include <string>

namespace parley {

/// Base of every error raised by the library. `what()` carries a
/// human-readable message; subclasses add structured fields.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Errors in the model itself (structure, semantics, or state space).
class ModelError : public Error {
public:
    using Error::Error;
};

/// An iterative solver did not reach its convergence threshold.
class NonConvergence : public Error {
public:
    using Error::Error;
};

/// Invalid input to an operation (bad arguments, wrong sizes, bad files).
class InputError : public Error {
public:
    using Error::Error;
};

} // namespace parley
