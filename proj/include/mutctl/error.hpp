// Copyright 2026 The mutctl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mutctl {

enum class ErrorKind {
  InvalidArgument,
  DimensionMismatch,
  TimeOutOfRange,
  SingularOrNotConvergent,
  InvalidCoefficients,
  MatrixNotConvergent,
  MaxIterExceeded,
  InnerNotContractive,
  OuterNotConverged,
  SchemaError,
  RangeError,
  IoError,
};

std::string_view to_string(ErrorKind kind);

/// Base exception for every failure raised by the library. The kind is the
/// machine-readable error class rendered into reports.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mutctl
