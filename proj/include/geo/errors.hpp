#pragma once

#include <stdexcept>
#include <string>

namespace geo {

// Base class for all failures raised by the library. Subclasses distinguish
// configuration problems (exit code 2 in the CLI) from numerical failures
// (exit code 3) from check failures (exit code 1).
class GeoError : public std::runtime_error {
 public:
  explicit GeoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failures ------------------------------------------------------

class NumericalError : public GeoError {
 public:
  using GeoError::GeoError;
};

// An evaluation produced NaN or Inf.
class NonFiniteError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Analytic derivative and finite-difference probe disagree beyond tolerance.
class AnalyticNumericMismatch : public NumericalError {
 public:
  AnalyticNumericMismatch(const std::string& what, double analytic_norm,
                          double fd_norm, double residual)
      : NumericalError(what + ": analytic |.|=" + std::to_string(analytic_norm) +
                       " fd |.|=" + std::to_string(fd_norm) +
                       " residual=" + std::to_string(residual)) {}
};

// Mixed second derivatives fail to commute beyond tolerance.
class SymmetryViolation : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// The pairing matrix of a dual pair of frames is singular.
class DegeneratePairing : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Riemannian pairing restricted to the tangent space is singular.
class DegenerateTangentPairing : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Constraint Jacobian lost rank at the evaluation point.
class RankDeficientConstraint : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Parametric tangent frame lost rank at the evaluation point.
class RankDeficientFrame : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Gram matrix C' g^-1 C'^T (or psi^T g psi) is not invertible.
class SingularGram : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// A linear solve against a pushforward frame failed.
class RankFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Point violates its manifold's defining constraint beyond tolerance.
class OffManifoldError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Fiber vector is not in the sub-bundle it was claimed to be in.
class OffBundleError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Section value disagrees with its bundle projection at the base point.
class SectionViolation : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Vector expected in the vertical subspace is not.
class NotVertical : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Vector expected in the horizontal subspace is not.
class NotHorizontal : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Function on the horizontal phase space has a nonzero vertical derivative.
class NotHStarHamiltonian : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Matrix argument is singular or nearly so (polar / Lyapunov guards).
class NearSingular : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Integration step left the guard region (norm blowup or constraint escape).
class StepDiverged : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Rejection sampler exhausted its retry budget.
class SamplerStuck : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Configuration / usage failures ------------------------------------------

// Invalid manifold or operator specification (bad dimensions, non-SPD inertia...).
class SpecInvalid : public GeoError {
 public:
  using GeoError::GeoError;
};

// Invalid run configuration (unknown keys, missing files, bad values).
class ConfigInvalid : public GeoError {
 public:
  using GeoError::GeoError;
};

}  // namespace geo
