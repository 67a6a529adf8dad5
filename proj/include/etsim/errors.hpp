#pragma once

#include <stdexcept>
#include <string>

namespace etsim {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter or setup invariant was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A field was passed in the wrong domain (time vs frequency).
class DomainMismatchError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Two fields or records do not share a grid.
class GridMismatchError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Weights (or an intensity profile) sum to zero.
class DegenerateWeightsError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class EmptyInputError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// A closed form was asked for a configuration it does not cover.
class UnsupportedConfigurationError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Numerical guard failures. The CLI maps these to a dedicated exit code.
class NumericalGuardError : public Error {
 public:
  using Error::Error;
};

/// Field amplitude at the edge of a grid exceeds the aliasing threshold.
class AliasingError : public NumericalGuardError {
 public:
  using NumericalGuardError::NumericalGuardError;
};

/// A truncated series leaves more than the allowed tail.
class TruncationError : public NumericalGuardError {
 public:
  using NumericalGuardError::NumericalGuardError;
};

}  // namespace etsim
