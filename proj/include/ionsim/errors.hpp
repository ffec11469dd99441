#pragma once

#include <stdexcept>
#include <string>

namespace ionsim {

// Base class for all failures of the numerical machinery (as opposed to bad
// user input, which throws ConfigError / std::invalid_argument).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Equilibrium root-finder did not converge within the iteration cap.
class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, double residual)
      : NumericalError(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// A transverse mode has omega^2 <= 0 (zigzag instability).
class StabilityError : public NumericalError {
 public:
  StabilityError(const std::string& what, int mode) : NumericalError(what), mode_(mode) {}
  int mode() const { return mode_; }

 private:
  int mode_;
};

// Pulse synthesis: constraint null space is empty.
class InfeasibleError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Pulse synthesis: entangling angle of the null-space optimum is too small to rescale.
class DegeneratePulseError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Population reached the top Fock level; rerun with a larger cutoff.
class CutoffError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Step-halving certification failed to reach the requested accuracy.
class AccuracyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Brute-force state would exceed the memory budget.
class ResourceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Invalid quantum state handed to fidelity / simulation entry points.
class DomainError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ionsim
