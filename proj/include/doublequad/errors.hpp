#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dq {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// A value failed a group or algebra membership check by more than the
/// renormalization tolerance.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class IndexMismatchError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

class NonFiniteStateError : public Error {
 public:
  NonFiniteStateError(const std::string& what, double time)
      : Error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

/// Raised when sampled velocities of a quadrature flow fail to commute.
class CommutativityViolation : public Error {
 public:
  CommutativityViolation(const std::string& what, double max_norm,
                         std::size_t first, std::size_t second)
      : Error(what), max_norm_(max_norm), first_(first), second_(second) {}

  double max_norm() const { return max_norm_; }
  std::size_t first_sample() const { return first_; }
  std::size_t second_sample() const { return second_; }

 private:
  double max_norm_;
  std::size_t first_;
  std::size_t second_;
};

}  // namespace dq
