#pragma once

#include <stdexcept>
#include <string>

namespace sketchpress {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied parameter violates a precondition (bad rank, bad sketch
/// geometry, invalid codec settings, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Reading or writing a file failed, or a file is malformed.
class IoError : public Error {
 public:
  using Error::Error;
};

/// File contents violate the on-disk format (bad magic, truncation,
/// checksum mismatch).
class FormatError : public IoError {
 public:
  using IoError::IoError;
};

/// A numerical kernel failed: non-finite data, rank deficiency that cannot be
/// regularized, backend non-convergence.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace sketchpress
