#pragma once

#include <stdexcept>
#include <string>

namespace diracgap {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Input or configuration failed validation before any compute started.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An iterative method hit its cap. best_residual is the smallest residual seen.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_residual)
      : std::runtime_error(what), best_residual_(best_residual) {}
  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

// The ground state has left the gap through -m: the potential is too strong.
class SupercriticalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shooting could not bracket a decaying trajectory.
class NoSolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace diracgap
