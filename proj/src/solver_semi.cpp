// Copyright 2026 The mutctl Authors
// SPDX-License-Identifier: Apache-2.0

// Semi-observability: y(0) = beta is prescribed and x(0) is recovered from
// the proportionality condition.

#include <algorithm>
#include <cmath>
#include <string>

#include "mutctl/kernels.hpp"
#include "solver_engine.hpp"

namespace mutctl {

namespace {

class SemiOperator {
 public:
  SemiOperator(const ProblemParams& p, const SemigroupSpec& s,
               const NonlinearPair& fg, const StateVector& beta,
               const TimeGrid& grid)
      : p_(p),
        ws_(s, grid, fg),
        st_(s.at(p.T)),
        beta_(beta),
        y_flow_(grid, s.dim()),
        z_(s.dim()),
        j_(s.dim()),
        c_(s.dim()) {
    ws_.props().flow(beta.coords(), y_flow_);
  }

  void operator()(const Trajectory& x, const Trajectory& y, Trajectory& xo,
                  Trajectory& yo) {
    ws_.evaluate(x, y);
    build_x(x, xo);
    build_y(yo);
  }

  void apply_n1(const Trajectory& x, const Trajectory& y, Trajectory& xo) {
    ws_.evaluate(x, y);
    build_x(x, xo);
  }

  void apply_n2(const Trajectory& x, const Trajectory& y, Trajectory& yo) {
    ws_.evaluate(x, y, /*need_f=*/false);
    build_y(yo);
  }

  const Trajectory& y_flow() const { return y_flow_; }

 private:
  // N1_i = S(t_i) z + conv_F(t_i) with
  // z = S(T)(x(0) - k beta)/a + (kb/a) beta + J/a, using S(t+T) = S(t) S(T).
  void build_x(const Trajectory& x, Trajectory& xo) {
    const double inv_a = 1.0 / p_.a;
    std::copy(x.at(0).begin(), x.at(0).end(), c_.begin());
    kernels::axpy(-p_.k, beta_.coords(), c_);
    st_.apply(c_, z_);
    for (double& v : z_) v *= inv_a;
    kernels::axpy(p_.k * p_.b * inv_a, beta_.coords(), z_);
    ws_.difference_at_T(p_.k, j_);
    kernels::axpy(inv_a, j_, z_);
    ws_.assemble(z_, ws_.conv_f(), xo);
  }

  void build_y(Trajectory& yo) const {
    const auto src = y_flow_.data();
    auto dst = yo.data();
    std::copy(src.begin(), src.end(), dst.begin());
    kernels::axpy(1.0, ws_.conv_g().data(), dst);
  }

  ProblemParams p_;
  detail::OperatorWorkspace ws_;
  Propagator st_;
  StateVector beta_;
  Trajectory y_flow_;
  std::vector<double> z_, j_, c_;
};

void check_beta(const SemigroupSpec& s, const StateVector& beta) {
  require_same_dim(s.dim(), beta.dim(), "beta");
}

SolveReport certified_report(const char* method, const NonnegMatrix2& m,
                             double theta) {
  SolveReport r;
  r.method = method;
  r.certificate = m;
  r.rho = spectral_radius(m);
  r.theta = theta;
  return r;
}

[[noreturn]] void throw_not_convergent(SolveReport report) {
  throw SolveError(ErrorKind::MatrixNotConvergent,
                   "certification matrix is not convergent to zero (rho = " +
                       std::to_string(*report.rho) + ")",
                   std::move(report));
}

}  // namespace

std::pair<Trajectory, Trajectory> apply_N_semi(const ProblemParams& p,
                                               const SemigroupSpec& s,
                                               const NonlinearPair& fg,
                                               const StateVector& beta,
                                               const Trajectory& x,
                                               const Trajectory& y) {
  p.validate();
  check_beta(s, beta);
  require_same_dim(s.dim(), x.dim(), "apply_N_semi x");
  require_same_dim(s.dim(), y.dim(), "apply_N_semi y");
  if (!(x.grid() == y.grid()))
    throw Error(ErrorKind::InvalidArgument, "x and y must share a grid");
  SemiOperator op(p, s, fg, beta, x.grid());
  Trajectory xo(x.grid(), x.dim());
  Trajectory yo(y.grid(), y.dim());
  op(x, y, xo, yo);
  return {std::move(xo), std::move(yo)};
}

ThetaCoefficients semi_theta_coefficients(const ProblemParams& p,
                                          const LipschitzData& lip, double c_a) {
  const double inv_a = 1.0 / p.a;
  ThetaCoefficients c;
  c.a11 = c_a * (inv_a + (1.0 + inv_a) * p.T * lip.a11 + p.k * inv_a * p.T * lip.a21);
  c.a12 = c_a * ((1.0 + inv_a) * lip.a12 + p.k * inv_a * lip.a22);
  c.a21 = c_a * p.T * lip.a21;
  c.a22 = c_a * lip.a22;
  c.T = p.T;
  return c;
}

NonnegMatrix2 build_M_semi(const ProblemParams& p, const LipschitzData& lip,
                           double c_a, double theta) {
  return m_theta(semi_theta_coefficients(p, lip, c_a), theta);
}

SolveResult perov_solve_semi(const ProblemParams& p, const SemigroupSpec& s,
                             const NonlinearPair& fg, const LipschitzData& lip,
                             const StateVector& beta, const TimeGrid& grid,
                             const SolverConfig& cfg) {
  detail::validate_inputs(p, s, lip, grid, cfg);
  check_beta(s, beta);
  const double c_a = bound_CA(s);
  const NonnegMatrix2 m = build_M_semi(p, lip, c_a, cfg.theta);
  SolveReport report = certified_report("perov-semi", m, cfg.theta);
  if (cfg.certify && !is_convergent_to_zero(m)) throw_not_convergent(std::move(report));

  SemiOperator op(p, s, fg, beta, grid);
  Trajectory x(grid, s.dim());
  const StateVector x0 = detail::initial_x_guess(p, s, beta, cfg);
  GridPropagators(s, grid).flow(x0.coords(), x);
  Trajectory y = op.y_flow();

  const auto outcome = detail::picard(
      [&](const Trajectory& xi, const Trajectory& yi, Trajectory& xo, Trajectory& yo) {
        op(xi, yi, xo, yo);
      },
      x, y, 0.0, cfg.theta, cfg.tol, cfg.max_iter, &report.residual_history);
  report.iterations = outcome.iterations;
  report.converged = outcome.converged;
  if (!outcome.converged)
    throw SolveError(ErrorKind::MaxIterExceeded,
                     outcome.diverged ? "Picard iteration diverged"
                                      : "Picard residuals did not reach tol",
                     std::move(report));
  detail::finish_report(report, p, s, fg, x, y, cfg);
  return {std::move(x), std::move(y), std::move(report)};
}

SolveResult avramescu_solve_semi(const ProblemParams& p, const SemigroupSpec& s,
                                 const NonlinearPair& fg, const LipschitzData& lip,
                                 const StateVector& beta, const TimeGrid& grid,
                                 const SolverConfig& cfg) {
  detail::validate_inputs(p, s, lip, grid, cfg);
  check_beta(s, beta);
  const double c_a = bound_CA(s);
  const NonnegMatrix2 m = build_M_semi(p, lip, c_a, cfg.theta);
  SolveReport report = certified_report("avramescu-semi", m, cfg.theta);

  const double inner_factor = lip.a22 * c_a * phi_minus(cfg.theta, p.T);
  if (!(inner_factor < 1.0))
    throw SolveError(ErrorKind::InnerNotContractive,
                     "y-update factor a22 C_A phi_minus(theta) = " +
                         std::to_string(inner_factor) + " is not < 1",
                     std::move(report));
  if (cfg.certify && !is_convergent_to_zero(m)) throw_not_convergent(std::move(report));
  if (is_convergent_to_zero(m)) {
    const auto c = schauder_constants(p, lip, c_a, beta.norm(), cfg.c1_with_T);
    report.radii = schauder_radii(m, c[0], c[1]);
  }

  SemiOperator op(p, s, fg, beta, grid);
  Trajectory x(grid, s.dim());
  GridPropagators(s, grid).flow(detail::initial_x_guess(p, s, beta, cfg).coords(), x);
  Trajectory y = op.y_flow();
  Trajectory x_next = x;
  Trajectory y_scratch = y;

  // Inner Banach loop y <- N2(x, y) for frozen x.
  const auto solve_y = [&](const Trajectory& xf, double& last_residual) {
    for (int it = 1; it <= cfg.max_iter; ++it) {
      op.apply_n2(xf, y, y_scratch);
      last_residual = bielecki_distance(y_scratch, y, cfg.theta);
      std::swap(y, y_scratch);
      ++report.inner_iterations;
      if (!std::isfinite(last_residual)) return false;
      if (last_residual <= cfg.tol) return true;
    }
    return false;
  };

  double ry = 0.0;
  for (int m_out = 1; m_out <= cfg.max_iter; ++m_out) {
    if (!solve_y(x, ry))
      throw SolveError(ErrorKind::MaxIterExceeded, "inner y-iteration stalled",
                       std::move(report));
    op.apply_n1(x, y, x_next);
    const double rx = bielecki_distance(x_next, x, 0.0);
    std::swap(x, x_next);
    report.iterations = m_out;
    report.residual_history.push_back({rx, ry});
    if (!std::isfinite(rx) || rx > 1e150) break;
    if (rx <= cfg.tol) {
      report.converged = true;
      break;
    }
  }
  if (!report.converged)
    throw SolveError(ErrorKind::MaxIterExceeded,
                     "alternating scheme did not converge in x", std::move(report));
  // Refresh y against the final x so the pair is consistent.
  if (!solve_y(x, ry))
    throw SolveError(ErrorKind::MaxIterExceeded, "inner y-iteration stalled",
                     std::move(report));
  if (report.radii)
    report.localized =
        verify_localization(x, y, (*report.radii)[0], (*report.radii)[1], cfg.theta);
  detail::finish_report(report, p, s, fg, x, y, cfg);
  return {std::move(x), std::move(y), std::move(report)};
}

}  // namespace mutctl
