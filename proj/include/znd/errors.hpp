#pragma once

#include <stdexcept>
#include <string>

namespace znd {

// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Parameter set violates an admissibility inequality.
struct AdmissibilityError : Error {
  using Error::Error;
};

// Input outside the mathematical domain of an operation.
struct DomainError : Error {
  using Error::Error;
};

// Quadrature failed to reach the requested tolerance within its budget.
struct ConvergenceError : Error {
  using Error::Error;
};

// Adaptive ODE step size fell below machine scale.
struct StepSizeUnderflow : Error {
  using Error::Error;
};

// A state vector or integrand value became NaN or infinite.
struct NonFiniteState : Error {
  using Error::Error;
};

// Evaluation too close to a removable-singularity denominator.
struct SingularityError : Error {
  using Error::Error;
};

// Eigenmode construction hit a resonance between decay rates.
struct DegenerateError : Error {
  using Error::Error;
};

// Contour construction parameters are inconsistent.
struct GeometryError : Error {
  using Error::Error;
};

// Winding-number refinement hit its depth limit without settling.
struct RefinementExhausted : Error {
  using Error::Error;
};

// The evaluated function vanished (to machine scale) on the contour.
struct ZeroOnContour : Error {
  using Error::Error;
};

// Simulation time step violates the CFL constraint.
struct CflViolation : Error {
  using Error::Error;
};

// Simulation grid too coarse for the reaction length.
struct GridError : Error {
  using Error::Error;
};

// File output failed.
struct IoError : Error {
  using Error::Error;
};

// Two algebraically equivalent evaluation routes disagreed beyond rounding.
struct ConsistencyError : Error {
  using Error::Error;
};

}  // namespace znd
