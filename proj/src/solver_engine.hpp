// Copyright 2026 The mutctl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Shared machinery of the fixed-point solvers: nonlinearity evaluation on the
// grid, the two convolutions, and the generic Picard loop.

#include <array>
#include <functional>
#include <vector>

#include "mutctl/solver.hpp"

namespace mutctl::detail {

/// Workspace for one (x, y) -> (F, G, conv F, conv G) sweep over the grid.
class OperatorWorkspace {
 public:
  OperatorWorkspace(const SemigroupSpec& s, const TimeGrid& grid,
                    const NonlinearPair& fg);

  const GridPropagators& props() const { return props_; }
  const Trajectory& conv_f() const { return cf_; }
  const Trajectory& conv_g() const { return cg_; }

  /// Evaluates F, G at every node and both convolutions. With
  /// `need_f == false` only the G convolution is refreshed.
  void evaluate(const Trajectory& x, const Trajectory& y, bool need_f = true);

  /// J = int_0^T S(T - s)(F - kG) ds from the last evaluate().
  void difference_at_T(double k, std::span<double> out) const;

  /// out_i = S(t_i) z + conv_i for every node.
  void assemble(std::span<const double> z, const Trajectory& conv,
                Trajectory& out) const;

 private:
  GridPropagators props_;
  const NonlinearPair& fg_;
  Trajectory fv_, gv_, cf_, cg_;
};

struct PicardOutcome {
  bool converged = false;
  bool diverged = false;
  int iterations = 0;
};

/// Iterates (x, y) <- step(x, y) until both residuals are <= tol. Residuals
/// are |dx| in the Bielecki-theta_x norm and |dy| in the Bielecki-theta_y
/// norm; they are appended to `history` when it is non-null.
PicardOutcome picard(
    const std::function<void(const Trajectory&, const Trajectory&, Trajectory&,
                             Trajectory&)>& step,
    Trajectory& x, Trajectory& y, double theta_x, double theta_y, double tol,
    int max_iter, std::vector<std::array<double, 2>>* history);

/// Initial x(0): the caller's guess, or the zero-nonlinearity solution
/// (aI - S(T))^{-1} k (b I - S(T)) beta, falling back to k beta.
StateVector initial_x_guess(const ProblemParams& p, const SemigroupSpec& s,
                            const StateVector& beta, const SolverConfig& cfg);

/// Fills defect, defect_tolerance and forward_defect of `report`.
void finish_report(SolveReport& report, const ProblemParams& p,
                   const SemigroupSpec& s, const NonlinearPair& fg,
                   const Trajectory& x, const Trajectory& y,
                   const SolverConfig& cfg);

void validate_inputs(const ProblemParams& p, const SemigroupSpec& s,
                     const LipschitzData& lip, const TimeGrid& grid,
                     const SolverConfig& cfg);

}  // namespace mutctl::detail
