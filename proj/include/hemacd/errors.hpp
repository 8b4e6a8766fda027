// Copyright 2026 The hemacd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace hemacd {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid ring/scheme parameters (no 2N-th root, bad chain, mismatched rings).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Value does not fit into the modulus headroom at the requested scale.
class EncodingError : public Error {
 public:
  using Error::Error;
};

// Multiplicative depth exhausted: an operation needs a level below 0.
class DepthError : public Error {
 public:
  using Error::Error;
};

// Operand levels or scales disagree, or a requested level is out of range.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

class MetricError : public Error {
 public:
  using Error::Error;
};

// Malformed bytes on the wire or in a serialized object.
class FormatError : public Error {
 public:
  using Error::Error;
};

class ProtocolError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace hemacd
