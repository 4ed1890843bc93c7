// Copyright 2026 The mutctl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Run configuration: a JSON document with `schema_version: 1`. Unknown keys
// are rejected with their full path; numeric constraints raise RangeError.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mutctl/matrix2.hpp"
#include "mutctl/nonlinearity.hpp"
#include "mutctl/solver.hpp"

namespace mutctl {

enum class Command {
  AnalyzeMatrix,
  FindTheta,
  SolveSemi,
  SolveObserve,
  DemoDiffusion,
  SweepTheta,
  SelfTest,
};
std::string_view to_string(Command c);
std::optional<Command> parse_command(std::string_view text);

enum class SemigroupKind { Scalar, Matrix, Heat1D };
std::string_view to_string(SemigroupKind k);

struct SemigroupDesc {
  SemigroupKind kind = SemigroupKind::Scalar;
  double lambda = 0.0;                 // scalar
  std::size_t n = 0;                   // matrix
  std::vector<double> generator;       // matrix, row-major
  double L = 1.0;                      // heat1d
  double nu = 1.0;                     // heat1d
  int n_modes = 32;                    // heat1d
  int n_quad = 0;                      // heat1d, 0 = 2 n_modes + 1
};

/// Solver selection for solve-semi; Auto follows the condition class.
enum class Scheme { Auto, Perov, Schauder, Avramescu };
std::string_view to_string(Scheme s);

struct SweepPlan {
  double theta_min = 0.0;
  double theta_max = 5.0;
  int samples = 64;
};

struct RunConfig {
  std::optional<Command> command;
  ProblemParams problem;
  SemigroupDesc semigroup;
  int n_steps = 256;
  SolverConfig solver;
  bool theta_auto = false;
  Scheme scheme = Scheme::Auto;

  std::string nonlinearity = "zero";
  std::vector<double> nonlinearity_params;
  std::optional<ConditionClass> condition;
  /// Explicit constants; when absent they are derived from the registry.
  std::optional<LipschitzData> lipschitz;

  std::vector<double> beta;
  std::vector<double> alpha0;
  std::vector<double> beta0;

  std::optional<NonnegMatrix2> matrix;
  std::optional<ThetaCoefficients> theta_coefficients;
  /// 0 selects the default 50/T.
  double theta_max = 0.0;
  int theta_grid = 1024;

  SweepPlan sweep;
  std::string output_dir = "out";
  std::uint64_t seed = 0;
};

/// Parses and validates. Each override is `dotted.path=value`; the value is
/// read as JSON when it parses, as a string otherwise, and is applied before
/// validation. Throws Error(SchemaError) or Error(RangeError).
RunConfig parse_config(std::string_view text,
                       const std::vector<std::string>& overrides = {});

}  // namespace mutctl
