// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace neimkit {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A matrix was singular (or singular to working tolerance) where an
/// invertible one was required.
class SingularMatrixError : public Error {
  public:
    using Error::Error;
};

/// An iterative method failed to converge within its iteration budget.
class ConvergenceError : public Error {
  public:
    using Error::Error;
};

/// Invalid configuration (layer sizes, tolerances, ...).
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// Bad input data (non-finite values, shape mismatch, empty sets, ...).
class DataError : public Error {
  public:
    using Error::Error;
};

/// Training produced a non-finite loss.
class DivergenceError : public Error {
  public:
    using Error::Error;
};

/// A greedy construction hit a numerically degenerate state.
class DegeneracyError : public Error {
  public:
    using Error::Error;
};

/// I/O failure (missing file, unparsable content).
class IoError : public Error {
  public:
    using Error::Error;
};

}  // namespace neimkit
