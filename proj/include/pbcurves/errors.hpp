#pragma once

#include <stdexcept>
#include <string>

namespace pbcurves {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (base-point mismatch,
/// non-positive exponent, undefined h = 1/(2k), ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class UnsupportedDimension : public Error {
 public:
  using Error::Error;
};

class UnsupportedSpace : public Error {
 public:
  using Error::Error;
};

/// A closed-form curvature profile hits a pole of its denominator.
class PoleError : public Error {
 public:
  using Error::Error;
};

/// A second-variation formula was requested away from a critical curve.
class NotCriticalError : public Error {
 public:
  using Error::Error;
};

/// Geodesic curvature fell below the near-geodesic threshold where the
/// residual contains negative powers of k.
class NearGeodesicError : public Error {
 public:
  using Error::Error;
};

/// The fixed-step integrator rejected a step (constraint drift too large).
class IntegrationError : public Error {
 public:
  using Error::Error;
};

}  // namespace pbcurves
