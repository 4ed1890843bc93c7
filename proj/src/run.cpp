// Copyright 2026 The mutctl Authors
// SPDX-License-Identifier: Apache-2.0

#include "mutctl/run.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <ostream>
#include <thread>

#include "mutctl/kernels.hpp"

namespace mutctl {

namespace fs = std::filesystem;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MatrixNotConvergent:
    case ErrorKind::InnerNotContractive:
    case ErrorKind::InvalidCoefficients:
    case ErrorKind::SingularOrNotConvergent:
      return kExitInfeasible;
    case ErrorKind::MaxIterExceeded:
    case ErrorKind::OuterNotConverged:
      return kExitNotConverged;
    default:
      return kExitUsage;
  }
}

namespace {

StateVector sized(const std::vector<double>& v, std::size_t dim, const char* key,
                  bool pad) {
  if (v.size() > dim || (!pad && !v.empty() && v.size() != dim))
    throw Error(ErrorKind::RangeError, std::string(key) + " must have " +
                                           std::to_string(dim) + " entries");
  StateVector out(dim);
  std::copy(v.begin(), v.end(), out.coords().begin());
  return out;
}

ScalarNonlinearity registry_entry(const RunConfig& cfg) {
  return make_nonlinearity(cfg.nonlinearity, cfg.nonlinearity_params, cfg.condition);
}

}  // namespace

ProblemSetup build_problem(const RunConfig& cfg) {
  const SemigroupDesc& d = cfg.semigroup;
  const ScalarNonlinearity nl = registry_entry(cfg);
  const double T = cfg.problem.T;
  switch (d.kind) {
    case SemigroupKind::Heat1D: {
      DiffusionConfig dc;
      dc.L = d.L;
      dc.nu = d.nu;
      dc.n_modes = d.n_modes;
      dc.n_quad = d.n_quad;
      dc.nonlinearity = nl;
      dc.problem = cfg.problem;
      dc.beta = cfg.beta;
      dc.validate();
      ProblemSetup s{heat_semigroup(dc), superposition_pair(dc),
                     cfg.lipschitz.value_or(derive_constants(dc)),
                     beta_coefficients(dc), 1.0, dc};
      s.c_a = bound_CA(s.semigroup);
      return s;
    }
    case SemigroupKind::Matrix:
    case SemigroupKind::Scalar: {
      SemigroupSpec sg = d.kind == SemigroupKind::Scalar
                             ? SemigroupSpec::scalar(d.lambda, T)
                             : SemigroupSpec::matrix(d.n, d.generator, T);
      const std::size_t dim = sg.dim();
      ProblemSetup s{sg, componentwise(nl),
                     cfg.lipschitz.value_or(componentwise_constants(nl, dim)),
                     sized(cfg.beta, dim, "beta", false), 1.0, std::nullopt};
      s.c_a = bound_CA(s.semigroup);
      return s;
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown semigroup kind");
}

namespace {

struct Context {
  const RunConfig& cfg;
  fs::path dir;
  std::ostream& log;
  Report report;
};

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  body(os);
  if (!os) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

void write_trajectories(const Context& ctx, const Trajectory& x, const Trajectory& y,
                        const ProblemParams& p) {
  write_file(ctx.dir / "x.csv", [&](std::ostream& os) { write_csv(os, x); });
  write_file(ctx.dir / "y.csv", [&](std::ostream& os) { write_csv(os, y); });
  DemoResult norms{x, y, {}, {}, {}, running_defect(p, x, y)};
  for (std::size_t i = 0; i < x.size(); ++i) {
    norms.u_l2.push_back(euclidean_norm(x.at(i)));
    norms.v_l2.push_back(euclidean_norm(y.at(i)));
  }
  write_file(ctx.dir / "norms.csv", [&](std::ostream& os) { write_norms_csv(os, norms); });
}

void describe_problem(Report& r, const RunConfig& cfg, const ProblemSetup& ps) {
  r.set("problem.a", cfg.problem.a);
  r.set("problem.b", cfg.problem.b);
  r.set("problem.k", cfg.problem.k);
  r.set("problem.T", cfg.problem.T);
  r.set("semigroup.kind", std::string(to_string(cfg.semigroup.kind)));
  r.set("dim", static_cast<int>(ps.semigroup.dim()));
  r.set("C_A", ps.c_a);
  r.set("grid.n_steps", cfg.n_steps);
  r.set("nonlinearity", cfg.nonlinearity);
  r.set("lipschitz.mode", std::string(to_string(ps.lip.mode)));
  const double lip[6] = {ps.lip.a11, ps.lip.a12, ps.lip.a21, ps.lip.a22, ps.lip.g13,
                         ps.lip.g23};
  r.set("lipschitz.a11_a12_a21_a22_g13_g23", std::span<const double>(lip));
}

void set_state(Report& r, const std::string& key, std::span<const double> v) {
  r.set(key + "_norm", euclidean_norm(v));
  if (v.size() <= 16) r.set(key, v);
}

Scheme resolve_scheme(const RunConfig& cfg, const ProblemSetup& ps) {
  if (cfg.scheme != Scheme::Auto) return cfg.scheme;
  switch (ps.lip.mode) {
    case GrowthMode::Growth: return Scheme::Schauder;
    case GrowthMode::Mixed: return Scheme::Avramescu;
    case GrowthMode::Lipschitz: break;
  }
  return Scheme::Perov;
}

// Chooses theta for "auto": the search's best exponent, or an infeasibility
// verdict when no certificate exists.
std::optional<double> auto_theta(Context& ctx, const ProblemSetup& ps) {
  const auto c = semi_theta_coefficients(ctx.cfg.problem, ps.lip, ps.c_a);
  const double tmax =
      ctx.cfg.theta_max > 0.0 ? ctx.cfg.theta_max : default_theta_max(c.T);
  ThetaSearchResult res;
  try {
    res = find_theta(c, tmax, ctx.cfg.theta_grid);
  } catch (const Error& e) {
    ctx.report.set("theta_search.status", "invalid-coefficients");
    ctx.report.set("theta_search.message", e.what());
    return std::nullopt;
  }
  ctx.report.set("theta_search.status", std::string(to_string(res.status)));
  if (res.status == ThetaStatus::Infeasible || !res.theta_best) return std::nullopt;
  return *res.theta_best;
}

int solve_semi(Context& ctx, bool diffusion_demo) {
  const RunConfig& cfg = ctx.cfg;
  const ProblemSetup ps = build_problem(cfg);
  if (diffusion_demo && !ps.diffusion)
    throw Error(ErrorKind::SchemaError,
                "semigroup.kind: demo-diffusion requires heat1d");
  describe_problem(ctx.report, cfg, ps);
  SolverConfig scfg = cfg.solver;
  if (cfg.theta_auto) {
    const auto th = auto_theta(ctx, ps);
    if (!th && scfg.certify) {
      ctx.report.set("status", "certified-infeasible");
      return kExitInfeasible;
    }
    scfg.theta = th.value_or(0.0);
  }
  Scheme scheme = resolve_scheme(cfg, ps);
  if (diffusion_demo) {
    const ConditionClass cond = ps.diffusion->nonlinearity.condition;
    ctx.report.set("condition", std::string(to_string(cond)));
    scheme = cond == ConditionClass::C2   ? Scheme::Schauder
             : cond == ConditionClass::C3 ? Scheme::Avramescu
                                          : Scheme::Perov;
  }
  const TimeGrid grid(cfg.problem.T, cfg.n_steps);

  SolveResult r = [&]() -> SolveResult {
    ctx.report.set("scheme", std::string(to_string(scheme)));
    switch (scheme) {
      case Scheme::Schauder:
        return schauder_solve_semi(cfg.problem, ps.semigroup, ps.fg, ps.lip, ps.beta,
                                   grid, scfg);
      case Scheme::Avramescu:
        return avramescu_solve_semi(cfg.problem, ps.semigroup, ps.fg, ps.lip, ps.beta,
                                    grid, scfg);
      default:
        return perov_solve_semi(cfg.problem, ps.semigroup, ps.fg, ps.lip, ps.beta,
                                grid, scfg);
    }
  }();

  ctx.report.set("status", "ok");
  ctx.report.add_solve(r.report);
  set_state(ctx.report, "x0", r.x.at(0));
  set_state(ctx.report, "y0", r.y.at(0));
  if (ps.diffusion && cfg.nonlinearity == "zero") {
    // Mode-wise closed form of the linear problem, first mode.
    const double e = std::exp(ps.semigroup.eigenvalues()[0] * cfg.problem.T);
    const auto& p = cfg.problem;
    const double x1 = p.k * (p.b - e) / (p.a - e) * ps.beta[0];
    ctx.report.set("closed_form_x0_mode1", x1);
    ctx.report.set("closed_form_error_mode1", std::abs(r.x.at(0)[0] - x1));
  }
  write_trajectories(ctx, r.x, r.y, cfg.problem);
  return kExitOk;
}

int solve_observe(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const ProblemSetup ps = build_problem(cfg);
  describe_problem(ctx.report, cfg, ps);
  const std::size_t dim = ps.semigroup.dim();
  const bool pad = ps.diffusion.has_value();
  const StateVector alpha0 = sized(cfg.alpha0, dim, "alpha0", pad);
  const StateVector beta0 = sized(cfg.beta0, dim, "beta0", pad);
  const double st = norm_S_at(ps.semigroup, cfg.problem.T);
  ctx.report.set("norm_S_T", st);
  ctx.report.set("condition_iv_bound", 2.0 / (1.0 / cfg.problem.a + 1.0 / cfg.problem.b));
  ctx.report.set("relaxation", cfg.solver.relaxation);
  const TimeGrid grid(cfg.problem.T, cfg.n_steps);
  auto r = observability_solve(cfg.problem, ps.semigroup, ps.fg, ps.lip, grid,
                               cfg.solver, alpha0, beta0);
  ctx.report.set("status", "ok");
  ctx.report.add_solve(r.report);
  set_state(ctx.report, "alpha", r.alpha.coords());
  set_state(ctx.report, "beta", r.beta.coords());
  const MildResidual mr = mild_residual(ps.semigroup, ps.fg, r.x, r.y);
  ctx.report.set("mild_residual_x", mr.x);
  ctx.report.set("mild_residual_y", mr.y);
  write_trajectories(ctx, r.x, r.y, cfg.problem);
  return kExitOk;
}

int analyze_matrix(Context& ctx) {
  if (!ctx.cfg.matrix)
    throw Error(ErrorKind::SchemaError, "matrix: required for analyze-matrix");
  const NonnegMatrix2& m = *ctx.cfg.matrix;
  Report& r = ctx.report;
  const double e[4] = {m.a11(), m.a12(), m.a21(), m.a22()};
  r.set("matrix", std::span<const double>(e));
  r.set("trace", m.trace());
  r.set("det", m.det());
  r.set("rho", spectral_radius(m));
  const bool ok = is_convergent_to_zero(m);
  r.set("convergent_to_zero", ok);
  const NonnegMatrix2 p64 = power(m, 64);
  r.set("max_entry_power_64",
        std::max({p64.a11(), p64.a12(), p64.a21(), p64.a22()}));
  if (!ok) {
    r.set("status", "certified-infeasible");
    return kExitInfeasible;
  }
  const NonnegMatrix2 inv = inverse_I_minus(m);
  const double ie[4] = {inv.a11(), inv.a12(), inv.a21(), inv.a22()};
  r.set("inverse_I_minus", std::span<const double>(ie));
  r.set("status", "ok");
  return kExitOk;
}

ThetaCoefficients coefficients_for(Context& ctx) {
  if (ctx.cfg.theta_coefficients) return *ctx.cfg.theta_coefficients;
  const ProblemSetup ps = build_problem(ctx.cfg);
  describe_problem(ctx.report, ctx.cfg, ps);
  return semi_theta_coefficients(ctx.cfg.problem, ps.lip, ps.c_a);
}

int find_theta_cmd(Context& ctx) {
  const ThetaCoefficients c = coefficients_for(ctx);
  Report& r = ctx.report;
  const double ce[5] = {c.a11, c.a12, c.a21, c.a22, c.T};
  r.set("coefficients.a11_a12_a21_a22_T", std::span<const double>(ce));
  const double tmax = ctx.cfg.theta_max > 0.0 ? ctx.cfg.theta_max : default_theta_max(c.T);
  r.set("theta_max", tmax);
  r.set("h_at_zero", eval_h(c, 0.0));
  ThetaSearchResult res;
  try {
    res = find_theta(c, tmax, ctx.cfg.theta_grid);
  } catch (const Error& e) {
    r.set("status", "invalid-coefficients");
    r.set("message", e.what());
    return kExitInfeasible;
  }
  r.set("theta_status", std::string(to_string(res.status)));
  if (res.window) {
    r.set("window_lo", res.window->first);
    r.set("window_hi", res.window->second);
  }
  if (res.theta_best) {
    r.set("theta_best", *res.theta_best);
    r.set("rho_at_best", spectral_radius(m_theta(c, *res.theta_best)));
  }
  r.set("h_min", res.h_min);
  r.set("theta_argmin", res.theta_argmin);
  if (res.status == ThetaStatus::Infeasible) {
    r.set("status", "certified-infeasible");
    return kExitInfeasible;
  }
  r.set("status", "ok");
  return kExitOk;
}

struct SweepRow {
  double theta = 0.0;
  double h = 0.0;
  double rho = 0.0;
  bool converged = false;
  int iterations = 0;
  double defect = 0.0;
};

SweepRow sweep_sample(const RunConfig& cfg, const ProblemSetup& ps,
                      const ThetaCoefficients& c, double theta) {
  SweepRow row;
  row.theta = theta;
  row.h = eval_h(c, theta);
  row.rho = spectral_radius(m_theta(c, theta));
  SolverConfig scfg = cfg.solver;
  scfg.theta = theta;
  scfg.certify = false;
  scfg.forward_refine = 0;
  const TimeGrid grid(cfg.problem.T, cfg.n_steps);
  try {
    const auto r = perov_solve_semi(cfg.problem, ps.semigroup, ps.fg, ps.lip, ps.beta,
                                    grid, scfg);
    row.converged = r.report.converged;
    row.iterations = r.report.iterations;
    row.defect = r.report.defect;
  } catch (const SolveError& e) {
    row.iterations = e.report().iterations;
    row.defect = std::numeric_limits<double>::quiet_NaN();
  }
  return row;
}

int sweep_theta(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const ProblemSetup ps = build_problem(cfg);
  describe_problem(ctx.report, cfg, ps);
  const ThetaCoefficients c = semi_theta_coefficients(cfg.problem, ps.lip, ps.c_a);
  const int n = cfg.sweep.samples;
  std::vector<double> thetas(n);
  for (int i = 0; i < n; ++i)
    thetas[i] = n == 1 ? cfg.sweep.theta_min
                       : cfg.sweep.theta_min + (cfg.sweep.theta_max - cfg.sweep.theta_min) *
                                                   i / (n - 1);

  // Independent solver instances, joined in theta order.
  std::vector<SweepRow> rows(n);
  const int workers = std::max(1u, std::thread::hardware_concurrency());
  for (int start = 0; start < n; start += workers) {
    std::vector<std::future<SweepRow>> batch;
    for (int i = start; i < std::min(n, start + workers); ++i)
      batch.push_back(std::async(std::launch::async, sweep_sample, std::cref(cfg),
                                 std::cref(ps), std::cref(c), thetas[i]));
    for (int i = start; i < std::min(n, start + workers); ++i)
      rows[i] = batch[i - start].get();
  }

  write_file(ctx.dir / "sweep.csv", [&](std::ostream& os) {
    os << "theta,h,rho,converged,iterations,defect\n";
    for (const auto& row : rows)
      os << format_double(row.theta) << ',' << format_double(row.h) << ','
         << format_double(row.rho) << ',' << (row.converged ? "true" : "false") << ','
         << row.iterations << ',' << format_double(row.defect) << '\n';
  });

  int certified = 0, certified_converged = 0, converged = 0;
  for (const auto& row : rows) {
    converged += row.converged;
    if (row.rho < 1.0) {
      ++certified;
      certified_converged += row.converged;
    }
  }
  ctx.report.set("samples", n);
  ctx.report.set("sweep.theta_min", cfg.sweep.theta_min);
  ctx.report.set("sweep.theta_max", cfg.sweep.theta_max);
  ctx.report.set("converged_rows", converged);
  ctx.report.set("certified_rows", certified);
  ctx.report.set("certified_rows_converged", certified_converged);
  const bool consistent = certified == certified_converged;
  ctx.report.set("certified_implies_converged", consistent);
  ctx.report.set("status", consistent ? "ok" : "certified-row-not-converged");
  return consistent ? kExitOk : kExitNotConverged;
}

int dispatch(Context& ctx) {
  switch (*ctx.cfg.command) {
    case Command::AnalyzeMatrix: return analyze_matrix(ctx);
    case Command::FindTheta: return find_theta_cmd(ctx);
    case Command::SolveSemi: return solve_semi(ctx, false);
    case Command::DemoDiffusion: return solve_semi(ctx, true);
    case Command::SolveObserve: return solve_observe(ctx);
    case Command::SweepTheta: return sweep_theta(ctx);
    case Command::SelfTest: {
      const bool ok = self_test(ctx.report, ctx.log);
      ctx.report.set("status", ok ? "ok" : "failed");
      return ok ? kExitOk : kExitUsage;
    }
  }
  return kExitUsage;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& log) {
  if (!cfg.command) throw Error(ErrorKind::SchemaError, "command: required");
  Context ctx{cfg, fs::path(cfg.output_dir), log, {}};
  std::error_code ec;
  fs::create_directories(ctx.dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create " + ctx.dir.string());
  const std::string name(to_string(*cfg.command));
  ctx.report.set("command", name);
  ctx.report.set("kernels", std::string(kernels::name(kernels::active().backend)));

  int code = kExitOk;
  try {
    code = dispatch(ctx);
  } catch (const SolveError& e) {
    code = exit_code_for(e.kind());
    ctx.report.set("status", "error");
    ctx.report.set("error_class", std::string(to_string(e.kind())));
    ctx.report.set("error_message", e.what());
    ctx.report.add_solve(e.report());
  } catch (const Error& e) {
    code = exit_code_for(e.kind());
    ctx.report.set("status", "error");
    ctx.report.set("error_class", std::string(to_string(e.kind())));
    ctx.report.set("error_message", e.what());
  }
  ctx.report.set("exit_code", code);
  write_file(ctx.dir / "report.kv", [&](std::ostream& os) { ctx.report.write_kv(os); });
  write_file(ctx.dir / "report.txt",
             [&](std::ostream& os) { ctx.report.write_text(os, "mutctl " + name); });

  log << name << ": " << *ctx.report.find("status");
  const auto* status = ctx.report.find("status");
  if (const auto* d = ctx.report.find("defect"); d && *status == "ok")
    log << ", defect " << *d;
  if (const auto* it = ctx.report.find("iterations")) log << ", iterations " << *it;
  if (const auto* ec2 = ctx.report.find("error_class")) log << " [" << *ec2 << "]";
  log << " (exit " << code << ")\n";
  return code;
}

}  // namespace mutctl
