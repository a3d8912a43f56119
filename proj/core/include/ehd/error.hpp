#pragma once

#include <stdexcept>
#include <string>

namespace ehd {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad grid size, p < 1, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An iterative or direct solve failed to reach the requested tolerance.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, int iterations, double residual)
      : Error(what + " (iterations=" + std::to_string(iterations) +
              ", residual=" + std::to_string(residual) + ")"),
        iterations_(iterations),
        residual_(residual) {}

  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  int iterations_;
  double residual_;
};

/// Right-hand side of a pure Neumann problem has nonzero integral.
class Incompatible : public Error {
 public:
  explicit Incompatible(double mass)
      : Error("Neumann right-hand side is incompatible (integral=" + std::to_string(mass) + ")"),
        mass_(mass) {}
  double mass() const { return mass_; }

 private:
  double mass_;
};

/// Backtracking line search could not find a decrease of the objective.
class LineSearchStall : public Error {
 public:
  LineSearchStall(double objective, double step)
      : Error("line search stalled (J=" + std::to_string(objective) +
              ", step=" + std::to_string(step) + ")"),
        objective_(objective),
        step_(step) {}
  double objective() const { return objective_; }
  double step() const { return step_; }

 private:
  double objective_;
  double step_;
};

class CflViolation : public Error {
 public:
  CflViolation(double dt, double dt_limit)
      : Error("time step " + std::to_string(dt) + " exceeds CFL limit " + std::to_string(dt_limit)),
        dt_(dt),
        dt_limit_(dt_limit) {}
  double dt() const { return dt_; }
  double dt_limit() const { return dt_limit_; }

 private:
  double dt_;
  double dt_limit_;
};

/// Quantity is undefined for the zero field (e.g. a norm ratio).
class ZeroField : public Error {
 public:
  using Error::Error;
};

class EmptyWindow : public Error {
 public:
  using Error::Error;
};

class NonpositiveValues : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ehd
