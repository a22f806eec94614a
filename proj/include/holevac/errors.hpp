#pragma once

#include <stdexcept>
#include <string>

namespace holevac {

/// A physical or discretization parameter violates a documented constraint.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The basis cutoff R is too small for the requested transitions.
class CutoffError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

/// A set of per-mode records does not cover every occupied sea mode.
class CoverageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The time integrator lost unitarity beyond its health threshold.
class IntegratorHealthError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace holevac
