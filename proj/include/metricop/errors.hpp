#pragma once

#include <stdexcept>
#include <string>

namespace metricop {

// Base class for all domain errors thrown by this library.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DimensionMismatch : public Error {
  public:
    using Error::Error;
};

// Input expected Hermitian exceeds the hermiticity tolerance.
class NotHermitian : public Error {
  public:
    using Error::Error;
};

// Smallest eigenvalue at or below the positivity floor.
class NotPositive : public Error {
  public:
    using Error::Error;
};

class NoConvergence : public Error {
  public:
    using Error::Error;
};

// Vector expected to have unit quadrature norm does not.
class NotNormalized : public Error {
  public:
    using Error::Error;
};

// Grid weight function produced a non-finite entry.
class NonFiniteWeight : public Error {
  public:
    using Error::Error;
};

class GridTooCoarse : public Error {
  public:
    using Error::Error;
};

// Intertwining residual above tolerance.
class NotIntertwined : public Error {
  public:
    using Error::Error;
};

// Resolvent requested at a point of (or too close to) the spectrum.
class LambdaInSpectrum : public Error {
  public:
    using Error::Error;
};

// Intertwiner not invertible at the working floor.
class TNotInvertible : public Error {
  public:
    using Error::Error;
};

// Operator expected symmetric (A = A^*) is not.
class NotSymmetric : public Error {
  public:
    using Error::Error;
};

// Fewer refinement levels than a growth fit needs.
class InsufficientLevels : public Error {
  public:
    using Error::Error;
};

// Boundedness classification impossible with the data given.
class VerdictUnavailable : public Error {
  public:
    using Error::Error;
};

// Strict mode: pair residual too large to treat H as quasi-Hermitian.
class NotQuasiHermitian : public Error {
  public:
    using Error::Error;
};

// Malformed scenario or matrix JSON.
class ParseError : public Error {
  public:
    using Error::Error;
};

// Scenario names a recipe or demo that is not registered.
class UnknownRecipe : public Error {
  public:
    using Error::Error;
};

} // namespace metricop
