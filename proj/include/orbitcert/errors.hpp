#ifndef ORBITCERT_ERRORS_HPP
#define ORBITCERT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace orbitcert {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad model name, size parameter or run configuration; message names the field.
struct ConfigError : Error {
  using Error::Error;
};

/// Matrix shape mismatch.
struct DimensionError : Error {
  using Error::Error;
};

/// Group or manifold membership violated beyond tolerance.
struct DomainError : Error {
  using Error::Error;
};

/// Numerical corruption (non-positive spectra, failed factorizations).
struct NumericError : Error {
  using Error::Error;
};

/// Invalid argument to an algebraic operation.
struct ArgumentError : Error {
  using Error::Error;
};

/// Operation not defined for this model (root theory on the compact model,
/// irrational ad-eigenvalues on a hypothetical future model).
struct UnsupportedModelError : Error {
  using Error::Error;
};

struct InternalError : Error {
  using Error::Error;
};

}  // namespace orbitcert

#endif
