#pragma once

#include <stdexcept>
#include <string>

namespace ghzfisher {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An input violated a documented precondition (odd N, d < 3, ...).
class ValidationError : public Error {
public:
  using Error::Error;
};

/// Two operands disagree on a dimension (phase vector vs node count, ...).
class DimensionError : public Error {
public:
  using Error::Error;
};

/// A Fisher matrix had to be inverted but is singular or too ill-conditioned.
class SingularMatrixError : public Error {
public:
  using Error::Error;
};

/// The weight vector lies in the null space of the Fisher matrix.
class NullDirectionError : public Error {
public:
  using Error::Error;
};

/// The likelihood maximizer did not reach its gradient tolerance.
class ConvergenceError : public Error {
public:
  using Error::Error;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

inline void require_dim(bool condition, const std::string& message) {
  if (!condition) throw DimensionError(message);
}

} // namespace detail

} // namespace ghzfisher
