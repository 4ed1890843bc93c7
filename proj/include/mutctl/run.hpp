// Copyright 2026 The mutctl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Command execution. Every run writes report.txt and report.kv into the
// output directory, plus the command's CSV artifacts.

#include <iosfwd>
#include <optional>

#include "mutctl/config.hpp"
#include "mutctl/diffusion.hpp"
#include "mutctl/report.hpp"

namespace mutctl {

inline constexpr int kExitOk = 0;
/// Configuration, usage or I/O failure.
inline constexpr int kExitUsage = 1;
/// A required certificate could not be established.
inline constexpr int kExitInfeasible = 2;
/// An iteration failed to converge.
inline constexpr int kExitNotConverged = 3;

/// Exit code for a failure of the given kind.
int exit_code_for(ErrorKind kind);

/// Semigroup, nonlinearity and constants assembled from a RunConfig.
struct ProblemSetup {
  SemigroupSpec semigroup;
  NonlinearPair fg;
  LipschitzData lip;
  StateVector beta;
  double c_a = 1.0;
  std::optional<DiffusionConfig> diffusion;
};

ProblemSetup build_problem(const RunConfig& cfg);

/// Executes cfg.command (which must be set), writes artifacts into
/// cfg.output_dir and returns the exit code. A one-line summary goes to `log`.
int run(const RunConfig& cfg, std::ostream& log);

/// Built-in smoke checks; fills `report` and returns true when all pass.
bool self_test(Report& report, std::ostream& log);

}  // namespace mutctl
