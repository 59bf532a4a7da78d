#pragma once

#include <stdexcept>
#include <string>

namespace mmot {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Marginals (or point sets) with differing ambient dimension.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Marginals with differing support sizes inside one instance.
class SupportSizeMismatch : public Error {
 public:
  using Error::Error;
};

/// A measure with an empty support.
class EmptyMeasure : public Error {
 public:
  using Error::Error;
};

/// NaN or infinity in input coordinates.
class NonFiniteCoordinate : public Error {
 public:
  using Error::Error;
};

/// Cost tensor would exceed the configured entry cap.
class SizeOverflow : public Error {
 public:
  using Error::Error;
};

/// Assignment enumeration would exceed the configured cap.
class EnumerationOverflow : public Error {
 public:
  using Error::Error;
};

/// Operation requires two-point supports (m = 2).
class NotTwoPoint : public Error {
 public:
  using Error::Error;
};

/// Operation requires one-dimensional data (d = 1).
class NotOneDimensional : public Error {
 public:
  using Error::Error;
};

/// Simplex pivot budget exhausted before reaching an optimum.
class IterationLimit : public Error {
 public:
  using Error::Error;
};

/// Post-hoc verification of a dual certificate failed; signals a solver bug.
class CertificateInvalid : public Error {
 public:
  using Error::Error;
};

/// A coupling does not satisfy the marginal constraints it claims to.
class InfeasibleCoupling : public Error {
 public:
  using Error::Error;
};

/// States the solver can only reach through a bug (infeasible or unbounded
/// transport LP, dependent starting basis).
class InternalSolverError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file or JSON document.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Invalid generator or solver configuration.
class InvalidConfig : public Error {
 public:
  using Error::Error;
};

}  // namespace mmot
