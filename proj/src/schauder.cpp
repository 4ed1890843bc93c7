// Copyright 2026 The mutctl Authors
// SPDX-License-Identifier: Apache-2.0

// Growth regime: invariant-set radii and the localization check.

#include <cmath>
#include <string>

#include "solver_engine.hpp"

namespace mutctl {

std::array<double, 2> schauder_radii(const NonnegMatrix2& m, double c1, double c2) {
  if (!(c1 >= 0.0) || !(c2 >= 0.0))
    throw Error(ErrorKind::InvalidArgument, "schauder constants must be >= 0");
  const auto r = inverse_I_minus(m).apply({c1, c2});
  return {r[0], r[1]};
}

std::array<double, 2> schauder_constants(const ProblemParams& p,
                                         const LipschitzData& lip, double c_a,
                                         double beta_norm, bool c1_with_T) {
  const double inv_a = 1.0 / p.a;
  const double g13_term = c_a * (1.0 + inv_a) * lip.g13 * (c1_with_T ? p.T : 1.0);
  const double c1 = inv_a * c_a * (1.0 + p.b) * p.k * beta_norm +
                    c_a * p.k * inv_a * p.T * lip.g23 + g13_term;
  const double c2 = c_a * beta_norm + c_a * p.T * lip.g23;
  return {c1, c2};
}

bool verify_localization(const Trajectory& x, const Trajectory& y, double r1,
                         double r2, double theta) {
  constexpr double kSlack = 1.0 + 1e-9;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (euclidean_norm(x.at(i)) > r1 * kSlack) return false;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double w = std::exp(theta * y.grid().node(static_cast<int>(i)));
    if (euclidean_norm(y.at(i)) > w * r2 * kSlack) return false;
  }
  return true;
}

SolveResult schauder_solve_semi(const ProblemParams& p, const SemigroupSpec& s,
                                const NonlinearPair& fg, const LipschitzData& lip,
                                const StateVector& beta, const TimeGrid& grid,
                                const SolverConfig& cfg) {
  detail::validate_inputs(p, s, lip, grid, cfg);
  require_same_dim(s.dim(), beta.dim(), "beta");
  const double c_a = bound_CA(s);
  const NonnegMatrix2 m = build_M_semi(p, lip, c_a, cfg.theta);

  SolveReport report;
  report.method = "schauder-semi";
  report.certificate = m;
  report.rho = spectral_radius(m);
  report.theta = cfg.theta;
  const bool convergent = is_convergent_to_zero(m);
  if (cfg.certify && !convergent)
    throw SolveError(ErrorKind::MatrixNotConvergent,
                     "growth matrix is not convergent to zero (rho = " +
                         std::to_string(*report.rho) + ")",
                     std::move(report));
  if (convergent) {
    const auto c = schauder_constants(p, lip, c_a, beta.norm(), cfg.c1_with_T);
    report.radii = schauder_radii(m, c[0], c[1]);
  }

  // Start inside the invariant set: x = S(.) x_guess (0 by default), y = S(.) beta.
  SolverConfig inner = cfg;
  if (!inner.x_guess) inner.x_guess = StateVector(s.dim());
  inner.certify = false;
  const GridPropagators props(s, grid);
  Trajectory x(grid, s.dim());
  props.flow(inner.x_guess->coords(), x);
  Trajectory y(grid, s.dim());
  props.flow(beta.coords(), y);

  const auto pair = [&](const Trajectory& xi, const Trajectory& yi, Trajectory& xo,
                        Trajectory& yo) {
    auto [nx, ny] = apply_N_semi(p, s, fg, beta, xi, yi);
    xo = std::move(nx);
    yo = std::move(ny);
  };
  const auto outcome = detail::picard(pair, x, y, 0.0, cfg.theta, cfg.tol,
                                      cfg.max_iter, &report.residual_history);
  report.iterations = outcome.iterations;
  report.converged = outcome.converged;
  if (!outcome.converged)
    throw SolveError(ErrorKind::MaxIterExceeded,
                     outcome.diverged ? "Picard iteration diverged"
                                      : "Picard residuals did not reach tol",
                     std::move(report));
  if (report.radii)
    report.localized =
        verify_localization(x, y, (*report.radii)[0], (*report.radii)[1], cfg.theta);
  detail::finish_report(report, p, s, fg, x, y, cfg);
  return {std::move(x), std::move(y), std::move(report)};
}

}  // namespace mutctl
