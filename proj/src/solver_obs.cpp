// Copyright 2026 The mutctl Authors
// SPDX-License-Identifier: Apache-2.0

// Observability: both initial states are unknown. The inner problem freezes
// (alpha, beta) and is a Perov contraction in the Chebyshev norm; the outer
// map H(alpha, beta) = (x(0), y(0)) is iterated with damping.

#include <algorithm>
#include <cmath>
#include <string>

#include "mutctl/kernels.hpp"
#include "solver_engine.hpp"

namespace mutctl {

namespace {

class ObsOperator {
 public:
  ObsOperator(const ProblemParams& p, const SemigroupSpec& s,
              const NonlinearPair& fg, const TimeGrid& grid)
      : p_(p), ws_(s, grid, fg), st_(s.at(p.T)), z1_(s.dim()), z2_(s.dim()),
        base1_(s.dim()), base2_(s.dim()), j_(s.dim()), tmp_(s.dim()) {}

  // Precomputes the (alpha, beta)-dependent affine parts
  //   base1 = S(T) alpha - k S(T) beta + kb beta,
  //   base2 = -S(T) alpha + k S(T) beta + a alpha.
  void freeze(const StateVector& alpha, const StateVector& beta) {
    std::copy(alpha.coords().begin(), alpha.coords().end(), tmp_.begin());
    kernels::axpy(-p_.k, beta.coords(), tmp_);
    st_.apply(tmp_, base1_);
    for (std::size_t i = 0; i < base1_.size(); ++i) base2_[i] = -base1_[i];
    kernels::axpy(p_.k * p_.b, beta.coords(), base1_);
    kernels::axpy(p_.a, alpha.coords(), base2_);
  }

  void operator()(const Trajectory& x, const Trajectory& y, Trajectory& xo,
                  Trajectory& yo) {
    ws_.evaluate(x, y);
    ws_.difference_at_T(p_.k, j_);
    const double c1 = 1.0 / p_.a;
    const double c2 = 1.0 / (p_.k * p_.b);
    for (std::size_t i = 0; i < j_.size(); ++i) {
      z1_[i] = c1 * (base1_[i] + j_[i]);
      z2_[i] = c2 * (base2_[i] - j_[i]);
    }
    ws_.assemble(z1_, ws_.conv_f(), xo);
    ws_.assemble(z2_, ws_.conv_g(), yo);
  }

  const GridPropagators& props() const { return ws_.props(); }

 private:
  ProblemParams p_;
  detail::OperatorWorkspace ws_;
  Propagator st_;
  std::vector<double> z1_, z2_, base1_, base2_, j_, tmp_;
};

}  // namespace

std::pair<Trajectory, Trajectory> apply_N_obs(const ProblemParams& p,
                                              const SemigroupSpec& s,
                                              const NonlinearPair& fg,
                                              const StateVector& alpha,
                                              const StateVector& beta,
                                              const Trajectory& x,
                                              const Trajectory& y) {
  p.validate();
  require_same_dim(s.dim(), alpha.dim(), "alpha");
  require_same_dim(s.dim(), beta.dim(), "beta");
  require_same_dim(s.dim(), x.dim(), "apply_N_obs x");
  require_same_dim(s.dim(), y.dim(), "apply_N_obs y");
  if (!(x.grid() == y.grid()))
    throw Error(ErrorKind::InvalidArgument, "x and y must share a grid");
  ObsOperator op(p, s, fg, x.grid());
  op.freeze(alpha, beta);
  Trajectory xo(x.grid(), x.dim());
  Trajectory yo(y.grid(), y.dim());
  op(x, y, xo, yo);
  return {std::move(xo), std::move(yo)};
}

NonnegMatrix2 build_M_obs(const ProblemParams& p, const LipschitzData& lip,
                          double c_a) {
  const double col1 = c_a * (lip.a11 + p.k * lip.a21);
  const double col2 = c_a * (lip.a12 + p.k * lip.a22);
  const double inv_a = 1.0 / p.a;
  const double inv_kb = 1.0 / (p.k * p.b);
  const double s = p.T * c_a;
  return {s * (inv_a * col1 + lip.a11), s * (inv_a * col2 + lip.a12),
          s * (inv_kb * col1 + lip.a21), s * (inv_kb * col2 + lip.a22)};
}

ObservabilityResult observability_solve(const ProblemParams& p,
                                        const SemigroupSpec& s,
                                        const NonlinearPair& fg,
                                        const LipschitzData& lip,
                                        const TimeGrid& grid,
                                        const SolverConfig& cfg,
                                        const StateVector& alpha0,
                                        const StateVector& beta0) {
  detail::validate_inputs(p, s, lip, grid, cfg);
  require_same_dim(s.dim(), alpha0.dim(), "alpha0");
  require_same_dim(s.dim(), beta0.dim(), "beta0");
  const double c_a = bound_CA(s);
  const NonnegMatrix2 m = build_M_obs(p, lip, c_a);

  SolveReport report;
  report.method = "perov-observe";
  report.certificate = m;
  report.rho = spectral_radius(m);
  report.theta = 0.0;
  if (cfg.certify && !is_convergent_to_zero(m))
    throw SolveError(ErrorKind::MatrixNotConvergent,
                     "inner matrix is not convergent to zero (rho = " +
                         std::to_string(*report.rho) + ")",
                     std::move(report));
  const double st_norm = norm_S_at(s, p.T);
  const double limit = 2.0 / (1.0 / p.a + 1.0 / p.b);
  if (!(st_norm < limit))
    report.warnings.push_back("|S(T)| = " + std::to_string(st_norm) +
                              " is not below 2/(1/a + 1/b) = " +
                              std::to_string(limit));
  if (!fg.difference_bounded)
    report.warnings.push_back("F - kG is not declared bounded");

  ObsOperator op(p, s, fg, grid);
  StateVector alpha = alpha0;
  StateVector beta = beta0;
  Trajectory x(grid, s.dim());
  Trajectory y(grid, s.dim());
  op.props().flow(alpha.coords(), x);
  op.props().flow(beta.coords(), y);

  const double inner_tol = cfg.tol / 10.0;
  const double w = cfg.relaxation;
  const auto inner_step = [&](const Trajectory& xi, const Trajectory& yi,
                              Trajectory& xo, Trajectory& yo) { op(xi, yi, xo, yo); };
  const auto fail = [&](ErrorKind kind, const std::string& msg) {
    throw SolveError(kind, msg, report);
  };

  constexpr double kGrowth = 1e4;
  double first_step = 0.0;
  for (int m_out = 1; m_out <= cfg.max_iter; ++m_out) {
    op.freeze(alpha, beta);
    const auto inner = detail::picard(inner_step, x, y, 0.0, 0.0, inner_tol,
                                      cfg.max_iter, nullptr);
    report.inner_iterations += inner.iterations;
    if (!inner.converged)
      fail(ErrorKind::MaxIterExceeded, "inner Perov solve did not converge");

    // (alpha, beta) <- (1 - w)(alpha, beta) + w H(alpha, beta)
    StateVector alpha_next = (1.0 - w) * alpha + w * x.value(0);
    StateVector beta_next = (1.0 - w) * beta + w * y.value(0);
    const double da = euclidean_distance(alpha_next.coords(), alpha.coords());
    const double db = euclidean_distance(beta_next.coords(), beta.coords());
    alpha = std::move(alpha_next);
    beta = std::move(beta_next);
    report.iterations = m_out;
    report.residual_history.push_back({da, db});
    // Growth by kGrowth over the first step means the damped map expands;
    // stopping here keeps the inner tolerance attainable in floating point.
    const double step = da + db;
    if (m_out == 1) first_step = std::max(step, cfg.tol);
    if (!std::isfinite(step) || step > kGrowth * first_step)
      fail(ErrorKind::OuterNotConverged,
           "outer iteration diverged (step " + std::to_string(step) + " after " +
               std::to_string(m_out) + " iterations)");
    if (da + db <= cfg.tol) {
      report.converged = true;
      break;
    }
  }
  if (!report.converged)
    fail(ErrorKind::OuterNotConverged, "outer iteration did not settle");

  // The last inner solution is the reported pair; its initial states are the
  // fixed point of H up to the outer tolerance.
  StateVector alpha_star = x.value(0);
  StateVector beta_star = y.value(0);
  detail::finish_report(report, p, s, fg, x, y, cfg);
  return {std::move(alpha_star), std::move(beta_star), std::move(x), std::move(y),
          std::move(report)};
}

}  // namespace mutctl
