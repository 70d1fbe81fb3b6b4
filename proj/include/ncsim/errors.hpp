#pragma once

#include <stdexcept>
#include <string>

namespace ncsim {

// Base class for all domain errors. CLI maps these to exit code 1.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Operands live in Hilbert spaces of different dimension.
class DimensionError : public Error {
  public:
    using Error::Error;
};

// A structural invariant fails beyond the requested tolerance
// (non-projector projectors, decompositions that miss the identity, ...).
class ValidationError : public Error {
  public:
    using Error::Error;
};

// A requested measurement lies outside a sub-model's simulated reach.
class NoMatchError : public Error {
  public:
    using Error::Error;
};

// File or document problems (missing files, malformed JSON, bad schema).
class IoError : public Error {
  public:
    using Error::Error;
};

// Command-line misuse. CLI maps these to exit code 2.
class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace ncsim
