#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace projdens {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset()` is the 1-based byte position.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Identifier that is neither a chart variable nor a known function.
class UnknownIdentifierError : public Error {
 public:
  using Error::Error;
};

/// A variable or array shape does not fit the declared dimension.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Evaluation outside the domain of a field (division by zero, log of a
/// non-positive value, non-integer power of a non-positive base, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class SingularJacobianError : public Error {
 public:
  using Error::Error;
};

class SingularMetricError : public Error {
 public:
  using Error::Error;
};

/// Coefficients Γ^k_ij and Γ^k_ji disagree.
class TorsionError : public Error {
 public:
  using Error::Error;
};

/// Ricci tensor is not symmetric, so the normal ω⁰ is undefined.
class AsymmetricRicciError : public Error {
 public:
  using Error::Error;
};

/// Point lies outside the positive fibre of the density bundle.
class FibreError : public Error {
 public:
  using Error::Error;
};

/// ODE integration failed; `time()` is the integrator time of the failure.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double time)
      : Error(what + " at t=" + std::to_string(time)), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

class BlowUpError : public IntegrationError {
 public:
  using IntegrationError::IntegrationError;
};

/// Rank-deficient sample configuration in a fit.
class DegenerateFitError : public Error {
 public:
  using Error::Error;
};

}  // namespace projdens
