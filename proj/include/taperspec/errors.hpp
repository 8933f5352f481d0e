#pragma once

#include <stdexcept>
#include <string>

namespace taperspec {

// Precondition violations are reported with std::invalid_argument; the types
// below cover domain failures that callers may want to tell apart.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// H_{2,T}(0) == 0 or the continuous norm of h vanishes.
class DegenerateTaperError : public Error {
 public:
  using Error::Error;
};

/// Circulant embedding produced a negative eigenvalue beyond tolerance.
class EmbeddingError : public Error {
 public:
  using Error::Error;
};

/// Enumeration request larger than the combinatorial guard allows.
class SizeGuardError : public Error {
 public:
  using Error::Error;
};

/// Model lacks what the operation needs (non-Gaussian input to a pairs-only
/// oracle, missing fourth-order innovation cumulant, non-stationary AR part).
class ModelError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace taperspec
