#pragma once
#include <stdexcept>
#include <string>

namespace ofbm {

/// Base for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Model or document content violates a hard constraint (root range,
/// reconstruction residual, malformed parameterization, ...).
struct ValidationError : Error {
  using Error::Error;
};

/// Raised by document parsing; carries the offending field path in the message.
struct ParseError : ValidationError {
  using ValidationError::ValidationError;
};

/// A raw matrix could not be eigendecomposed reliably; the caller must supply
/// an explicit (P, blocks) factorization instead.
struct NonDiagonalizableError : Error {
  using Error::Error;
};

/// A stem derivative of higher order than the stem implements was requested.
struct DerivativeUnavailableError : Error {
  using Error::Error;
};

/// Stem function undefined (or not analytic) at a block eigenvalue.
struct StemSingularError : Error {
  using Error::Error;
};

/// The linear system linking spectral and time-domain parameters is singular.
struct SingularConversionError : Error {
  using Error::Error;
};

/// Operation requires the exponent (1/2)I.
struct WrongExponentError : Error {
  using Error::Error;
};

struct NotObmError : Error {
  using Error::Error;
};

/// Exponent roots outside the long-range dependence band (1/2, 1).
struct LrdRangeError : Error {
  using Error::Error;
};

/// A spectral-density entry neither vanishes nor grows along the probe grid.
struct AmbiguousEntryError : Error {
  AmbiguousEntryError(const std::string& what, int i_, int j_) : Error(what), i(i_), j(j_) {}
  int i = -1, j = -1;
};

struct GridMissError : Error {
  using Error::Error;
};

struct CovarianceNotPsdError : Error {
  using Error::Error;
};

/// A certified numerical bound could not be brought under the requested
/// tolerance; `achieved` is the bound that was reached.
struct ToleranceError : Error {
  ToleranceError(const std::string& what, double achieved_) : Error(what), achieved(achieved_) {}
  double achieved = 0.0;
};

}  // namespace ofbm
