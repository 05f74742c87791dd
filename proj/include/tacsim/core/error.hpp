// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace tacsim {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed or truncated file, unsupported format, bad magic bytes.
class FormatError : public Error {
public:
  using Error::Error;
};

/// Input that violates a documented precondition or schema.
class ValidationError : public Error {
public:
  using Error::Error;
};

/// File system failures (missing file, unwritable directory).
class IoError : public Error {
public:
  using Error::Error;
};

/// A particle left the valid interior of the simulation grid.
class OutOfDomainError : public Error {
public:
  using Error::Error;
};

/// A deformation gradient lost positive determinant (or became non-finite).
class InversionError : public Error {
public:
  using Error::Error;
};

} // namespace tacsim
