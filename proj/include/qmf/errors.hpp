#pragma once

#include <stdexcept>

namespace qmf {

// Input outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Evaluation exactly at a pole.
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

// A truncated series whose certified tail exceeds the requested tolerance.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An iterative procedure that exhausted its budget.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qmf
