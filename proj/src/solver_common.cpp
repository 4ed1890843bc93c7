// Copyright 2026 The mutctl Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <string>

#include "mutctl/kernels.hpp"
#include "solver_engine.hpp"

namespace mutctl {

void ProblemParams::validate() const {
  const auto check = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw Error(ErrorKind::RangeError,
                  std::string("problem.") + name + " must be > 0, got " +
                      std::to_string(v));
  };
  check(a, "a");
  check(b, "b");
  check(k, "k");
  check(T, "T");
}

NonlinearPair NonlinearPair::zero() {
  NonlinearPair fg;
  fg.eval = [](std::span<const double>, std::span<const double>,
               std::span<double> f, std::span<double> g) {
    std::fill(f.begin(), f.end(), 0.0);
    std::fill(g.begin(), g.end(), 0.0);
  };
  fg.difference_bounded = true;
  return fg;
}

NonlinearPair NonlinearPair::from_components(Component f, Component g,
                                             bool difference_bounded) {
  NonlinearPair fg;
  fg.eval = [f = std::move(f), g = std::move(g)](
                std::span<const double> x, std::span<const double> y,
                std::span<double> fo, std::span<double> go) {
    f(x, y, fo);
    g(x, y, go);
  };
  fg.difference_bounded = difference_bounded;
  return fg;
}

std::string_view to_string(GrowthMode m) {
  switch (m) {
    case GrowthMode::Lipschitz: return "lipschitz";
    case GrowthMode::Growth: return "growth";
    case GrowthMode::Mixed: return "mixed";
  }
  return "unknown";
}

void LipschitzData::validate() const {
  const auto check = [](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw Error(ErrorKind::RangeError,
                  std::string("lipschitz.") + name + " must be >= 0");
  };
  check(a11, "a11");
  check(a12, "a12");
  check(a21, "a21");
  check(a22, "a22");
  check(g13, "g13");
  check(g23, "g23");
}

void SolverConfig::validate() const {
  if (!(theta >= 0.0) || !std::isfinite(theta))
    throw Error(ErrorKind::RangeError, "solver.theta must be >= 0");
  if (!(tol > 0.0))
    throw Error(ErrorKind::RangeError, "solver.tol must be > 0");
  if (max_iter < 1)
    throw Error(ErrorKind::RangeError, "solver.max_iter must be >= 1");
  if (!(relaxation > 0.0) || relaxation > 1.0)
    throw Error(ErrorKind::RangeError, "solver.relaxation must lie in (0, 1]");
  if (forward_refine < 0)
    throw Error(ErrorKind::RangeError, "solver.forward_refine must be >= 0");
}

namespace detail {

OperatorWorkspace::OperatorWorkspace(const SemigroupSpec& s, const TimeGrid& grid,
                                     const NonlinearPair& fg)
    : props_(s, grid),
      fg_(fg),
      fv_(grid, s.dim()),
      gv_(grid, s.dim()),
      cf_(grid, s.dim()),
      cg_(grid, s.dim()) {}

void OperatorWorkspace::evaluate(const Trajectory& x, const Trajectory& y,
                                 bool need_f) {
  for (std::size_t i = 0; i < x.size(); ++i)
    fg_.eval(x.at(i), y.at(i), fv_.at(i), gv_.at(i));
  if (need_f) props_.conv_all(fv_, cf_);
  props_.conv_all(gv_, cg_);
}

void OperatorWorkspace::difference_at_T(double k, std::span<double> out) const {
  const std::size_t n = static_cast<std::size_t>(props_.grid().n_steps());
  std::copy(cf_.at(n).begin(), cf_.at(n).end(), out.begin());
  kernels::axpy(-k, cg_.at(n), out);
}

void OperatorWorkspace::assemble(std::span<const double> z, const Trajectory& conv,
                                 Trajectory& out) const {
  for (int i = 0; i <= props_.grid().n_steps(); ++i) {
    auto row = out.at(i);
    std::copy(conv.at(i).begin(), conv.at(i).end(), row.begin());
    props_.at_node(i).apply_add(1.0, z, row);
  }
}

PicardOutcome picard(
    const std::function<void(const Trajectory&, const Trajectory&, Trajectory&,
                             Trajectory&)>& step,
    Trajectory& x, Trajectory& y, double theta_x, double theta_y, double tol,
    int max_iter, std::vector<std::array<double, 2>>* history) {
  // Residuals beyond this are treated as divergence.
  constexpr double kBlowUp = 1e150;
  PicardOutcome out;
  Trajectory xn = x;
  Trajectory yn = y;
  for (int m = 1; m <= max_iter; ++m) {
    step(x, y, xn, yn);
    const double rx = bielecki_distance(xn, x, theta_x);
    const double ry = bielecki_distance(yn, y, theta_y);
    std::swap(x, xn);
    std::swap(y, yn);
    out.iterations = m;
    if (history) history->push_back({rx, ry});
    if (!std::isfinite(rx) || !std::isfinite(ry) || rx > kBlowUp || ry > kBlowUp) {
      out.diverged = true;
      return out;
    }
    if (rx <= tol && ry <= tol) {
      out.converged = true;
      return out;
    }
  }
  return out;
}

StateVector initial_x_guess(const ProblemParams& p, const SemigroupSpec& s,
                            const StateVector& beta, const SolverConfig& cfg) {
  if (cfg.x_guess) {
    require_same_dim(s.dim(), cfg.x_guess->dim(), "solver.x_guess");
    return *cfg.x_guess;
  }
  const StateVector st_beta = apply(s, p.T, beta);
  const StateVector rhs = p.k * (p.b * beta - st_beta);
  try {
    return solve_shifted(s, p.a, rhs);
  } catch (const Error&) {
    return p.k * beta;
  }
}

void finish_report(SolveReport& report, const ProblemParams& p,
                   const SemigroupSpec& s, const NonlinearPair& fg,
                   const Trajectory& x, const Trajectory& y,
                   const SolverConfig& cfg) {
  report.defect = control_defect(p, x, y);
  report.defect_tolerance = 100.0 * cfg.tol;
  if (cfg.forward_refine > 0) {
    const int steps = cfg.forward_refine * x.grid().n_steps();
    report.forward_defect = forward_defect(p, s, fg, x.value(0), y.value(0), steps);
  }
  if (report.defect > report.defect_tolerance)
    report.warnings.push_back("controllability defect " +
                              std::to_string(report.defect) +
                              " exceeds the defect tolerance");
}

void validate_inputs(const ProblemParams& p, const SemigroupSpec& s,
                     const LipschitzData& lip, const TimeGrid& grid,
                     const SolverConfig& cfg) {
  p.validate();
  lip.validate();
  cfg.validate();
  const double tol = 1e-12 * p.T;
  if (std::abs(grid.horizon() - p.T) > tol || std::abs(s.horizon() - p.T) > tol)
    throw Error(ErrorKind::InvalidArgument,
                "grid, semigroup and problem must share the horizon T");
}

}  // namespace detail

double control_defect(const ProblemParams& p, const Trajectory& x,
                      const Trajectory& y) {
  if (!(x.grid() == y.grid()))
    throw Error(ErrorKind::InvalidArgument, "x and y must share a grid");
  require_same_dim(x.dim(), y.dim(), "control_defect");
  const std::size_t last = x.size() - 1;
  double s = 0.0;
  for (std::size_t d = 0; d < x.dim(); ++d) {
    const double r = x.at(last)[d] - p.a * x.at(0)[d] -
                     p.k * (y.at(last)[d] - p.b * y.at(0)[d]);
    s += r * r;
  }
  return std::sqrt(s);
}

std::vector<double> running_defect(const ProblemParams& p, const Trajectory& x,
                                   const Trajectory& y) {
  require_same_dim(x.dim(), y.dim(), "running_defect");
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double s = 0.0;
    for (std::size_t d = 0; d < x.dim(); ++d) {
      const double r =
          x.at(i)[d] - p.a * x.at(0)[d] - p.k * (y.at(i)[d] - p.b * y.at(0)[d]);
      s += r * r;
    }
    out[i] = std::sqrt(s);
  }
  return out;
}

double forward_defect(const ProblemParams& p, const SemigroupSpec& s,
                      const NonlinearPair& fg, const StateVector& x0,
                      const StateVector& y0, int n_steps) {
  require_same_dim(s.dim(), x0.dim(), "forward_defect x0");
  require_same_dim(s.dim(), y0.dim(), "forward_defect y0");
  if (n_steps < 1) throw Error(ErrorKind::InvalidArgument, "n_steps must be >= 1");
  const std::size_t d = s.dim();
  const double h = p.T / n_steps;
  const Propagator full = s.at(h);
  const Propagator half = s.at(0.5 * h);

  // State and stage buffers hold (x, y) back to back.
  std::vector<double> u(2 * d), k1(2 * d), k2(2 * d), k3(2 * d), k4(2 * d),
      w(2 * d), acc(2 * d), tmp(2 * d);
  std::copy(x0.coords().begin(), x0.coords().end(), u.begin());
  std::copy(y0.coords().begin(), y0.coords().end(), u.begin() + d);

  const auto lo = [d](std::vector<double>& v) { return std::span<double>(v.data(), d); };
  const auto hi = [d](std::vector<double>& v) { return std::span<double>(v.data() + d, d); };
  const auto eval = [&](std::vector<double>& at, std::vector<double>& out) {
    fg.eval(lo(at), hi(at), lo(out), hi(out));
  };
  const auto prop = [&](const Propagator& op, std::vector<double>& in,
                        std::vector<double>& out) {
    op.apply(lo(in), lo(out));
    op.apply(hi(in), hi(out));
  };
  const auto prop_add = [&](const Propagator& op, double alpha,
                            std::vector<double>& in, std::vector<double>& out) {
    op.apply_add(alpha, lo(in), lo(out));
    op.apply_add(alpha, hi(in), hi(out));
  };

  for (int step = 0; step < n_steps; ++step) {
    eval(u, k1);
    // k2 = N(S(h/2)(u + h/2 k1))
    tmp = u;
    kernels::axpy(0.5 * h, k1, tmp);
    prop(half, tmp, w);
    eval(w, k2);
    // k3 = N(S(h/2) u + h/2 k2)
    prop(half, u, w);
    kernels::axpy(0.5 * h, k2, w);
    eval(w, k3);
    // k4 = N(S(h) u + h S(h/2) k3)
    prop(full, u, w);
    prop_add(half, h, k3, w);
    eval(w, k4);
    // u <- S(h) u + h/6 (S(h) k1 + 2 S(h/2)(k2 + k3) + k4)
    prop(full, u, acc);
    prop_add(full, h / 6.0, k1, acc);
    tmp = k2;
    kernels::axpy(1.0, k3, tmp);
    prop_add(half, h / 3.0, tmp, acc);
    kernels::axpy(h / 6.0, k4, acc);
    u.swap(acc);
  }

  double sum = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double r = u[i] - p.a * x0[i] - p.k * (u[d + i] - p.b * y0[i]);
    sum += r * r;
  }
  return std::sqrt(sum);
}

MildResidual mild_residual(const SemigroupSpec& s, const NonlinearPair& fg,
                           const Trajectory& x, const Trajectory& y) {
  require_same_dim(s.dim(), x.dim(), "mild_residual");
  require_same_dim(s.dim(), y.dim(), "mild_residual");
  detail::OperatorWorkspace ws(s, x.grid(), fg);
  ws.evaluate(x, y);
  Trajectory rx(x.grid(), x.dim());
  Trajectory ry(y.grid(), y.dim());
  ws.assemble(x.at(0), ws.conv_f(), rx);
  ws.assemble(y.at(0), ws.conv_g(), ry);
  return {bielecki_distance(x, rx, 0.0), bielecki_distance(y, ry, 0.0)};
}

}  // namespace mutctl
