#pragma once

#include <stdexcept>
#include <string>

namespace minklog {

// Base for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parameters outside the domain of a function (b >= m/n, m <= 0, s < 0, p = 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// b >= m/(n+m): the volume is not differentiable along Minkowski/log perturbations.
class VariationalDomainError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Directions do not positively span R^n, so the halfspace intersection is unbounded.
class UnboundedBodyError : public Error {
 public:
  using Error::Error;
};

// A ray hits a lower-dimensional face, so the facet normal along it is ambiguous.
class TieError : public Error {
 public:
  using Error::Error;
};

class ToleranceError : public Error {
 public:
  using Error::Error;
};

// The measure is concentrated in a closed hemisphere.
class HemisphereError : public Error {
 public:
  using Error::Error;
};

// An accepted solver iterate dropped below the C0 floor on the support numbers.
class FloorViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace minklog
