// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef FILTERNET_COMMON_ERROR_HPP_
#define FILTERNET_COMMON_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace filternet {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tensor or signal shapes that do not agree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent input data (bad CSV cell, channel mismatch,
// split too short for the requested window).
class DataError : public Error {
 public:
  using Error::Error;
};

// File could not be opened, read, or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration value or unknown configuration key.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Non-finite loss or gradient during optimization.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

// Checkpoint file is corrupt, truncated, or of the wrong kind.
class CheckpointError : public Error {
 public:
  using Error::Error;
};

}  // namespace filternet

#endif  // FILTERNET_COMMON_ERROR_HPP_
