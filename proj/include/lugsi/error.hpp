#pragma once

#include <stdexcept>
#include <string>

namespace lugsi {

/// Base class of every error raised by the library.
class error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Caller violated an operation's contract (bad parameter, dimension mismatch, ...).
class usage_error : public error {
  public:
    using error::error;
};

/// Input data could not be parsed or does not satisfy the dataset invariants.
class data_error : public error {
  public:
    using error::error;
};

/// Non-finite arithmetic, failed factorization, or a configured size cap was hit.
class numeric_error : public error {
  public:
    using error::error;
};

}  // namespace lugsi
