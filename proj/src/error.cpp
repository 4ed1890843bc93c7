// Copyright 2026 The mutctl Authors
// SPDX-License-Identifier: Apache-2.0

#include "mutctl/error.hpp"

namespace mutctl {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::TimeOutOfRange: return "TimeOutOfRange";
    case ErrorKind::SingularOrNotConvergent: return "SingularOrNotConvergent";
    case ErrorKind::InvalidCoefficients: return "InvalidCoefficients";
    case ErrorKind::MatrixNotConvergent: return "MatrixNotConvergent";
    case ErrorKind::MaxIterExceeded: return "MaxIterExceeded";
    case ErrorKind::InnerNotContractive: return "InnerNotContractive";
    case ErrorKind::OuterNotConverged: return "OuterNotConverged";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::RangeError: return "RangeError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace mutctl
