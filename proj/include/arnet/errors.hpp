#pragma once

#include <stdexcept>
#include <string>

namespace arnet {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Input data is degenerate for the requested operation (e.g. constant series).
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// The linear system is rank deficient or too ill-conditioned to solve.
class SingularSystem : public Error {
 public:
  SingularSystem(const std::string& what, double condition_estimate)
      : Error(what), condition_estimate_(condition_estimate) {}
  double condition_estimate() const { return condition_estimate_; }

 private:
  double condition_estimate_;
};

/// Gradient descent produced a non-finite objective.
class Divergence : public Error {
 public:
  Divergence(const std::string& what, int epoch, double learning_rate)
      : Error(what), epoch_(epoch), learning_rate_(learning_rate) {}
  int epoch() const { return epoch_; }
  double learning_rate() const { return learning_rate_; }

 private:
  int epoch_;
  double learning_rate_;
};

/// A metric is undefined for the given inputs (0/0).
class UndefinedMetric : public Error {
 public:
  using Error::Error;
};

/// Not enough data points to carry out the computation.
class InsufficientData : public Error {
 public:
  using Error::Error;
};

}  // namespace arnet
