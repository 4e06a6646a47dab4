#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace openthermo {

/// Argument outside the physical domain (non-positive T, p, N, V, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Shape or layout mismatch between a state vector and its declaration.
class StructuralError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Model declaration that fails validation. Carries every violation found.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// Non-finite values or a state that left the admissible region mid-run.
class IntegrityError : public std::runtime_error {
 public:
  IntegrityError(const std::string& what, double t, std::vector<double> snapshot)
      : std::runtime_error(what), t_(t), snapshot_(std::move(snapshot)) {}
  double time() const noexcept { return t_; }
  const std::vector<double>& snapshot() const noexcept { return snapshot_; }

 private:
  double t_;
  std::vector<double> snapshot_;
};

/// Linear-algebra failure in the constrained solver (rank loss, no convergence).
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double condition_estimate = 0.0,
              std::vector<std::vector<double>> null_directions = {})
      : std::runtime_error(what),
        condition_(condition_estimate),
        null_directions_(std::move(null_directions)) {}
  double condition_estimate() const noexcept { return condition_; }
  const std::vector<std::vector<double>>& null_directions() const noexcept {
    return null_directions_;
  }

 private:
  double condition_;
  std::vector<std::vector<double>> null_directions_;
};

/// Operation called outside its supported scope (wrong system class, not isolated, ...).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace openthermo
