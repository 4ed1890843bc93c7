// Copyright 2026 The mutctl Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Tolerances and time limits are fixed; nothing here is tuned.

#include <sys/wait.h>

#include <Eigen/Eigenvalues>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "mutctl/diffusion.hpp"
#include "mutctl/solver.hpp"
#include "oracles/random.hpp"
#include "oracles/scalar_ode.hpp"

using namespace mutctl;

namespace {

const double kPi = std::acos(-1.0);
constexpr double kTol = 1e-10;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double f_sin(double, double y) { return 0.1 * std::sin(y); }
double g_cos(double x, double) { return 0.1 * std::cos(x); }

NonlinearPair scalar_pair() {
  return NonlinearPair::from_components(
      [](std::span<const double> x, std::span<const double> y, std::span<double> o) {
        for (std::size_t i = 0; i < o.size(); ++i) o[i] = f_sin(x[i], y[i]);
      },
      [](std::span<const double> x, std::span<const double> y, std::span<double> o) {
        for (std::size_t i = 0; i < o.size(); ++i) o[i] = g_cos(x[i], y[i]);
      },
      true);
}

// lambda = -1, F = 0.1 sin y, G = 0.1 cos x, a = 2, b = 1, k = 1, T = 1, beta = 0.5.
struct Reference {
  ProblemParams p{2.0, 1.0, 1.0, 1.0};
  SemigroupSpec s = SemigroupSpec::scalar(-1.0, 1.0);
  NonlinearPair fg = scalar_pair();
  LipschitzData lip{0.0, 0.1, 0.1, 0.0, 0.0, 0.0, GrowthMode::Lipschitz};
  StateVector beta{0.5};

  SolveResult solve(int n, SolverConfig cfg = {}) const {
    return perov_solve_semi(p, s, fg, lip, beta, TimeGrid(p.T, n), cfg);
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome matrix_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  gen::Rng rng(1);
  int disagreements = 0, tested = 0;
  for (int i = 0; i < 10000; ++i) {
    const NonnegMatrix2 m(rng.uniform(0, 2), rng.uniform(0, 2), rng.uniform(0, 2),
                          rng.uniform(0, 2));
    Eigen::Matrix2d a;
    a << m.a11(), m.a12(), m.a21(), m.a22();
    const double rho = a.eigenvalues().cwiseAbs().maxCoeff();
    if (std::abs(rho - 1.0) < 1e-9) continue;
    ++tested;
    bool inverse_nonneg = false;
    try {
      const auto inv = inverse_I_minus(m);
      inverse_nonneg = inv.a11() >= 0 && inv.a12() >= 0 && inv.a21() >= 0 && inv.a22() >= 0;
    } catch (const Error&) {
    }
    const bool test = is_convergent_to_zero(m);
    if (test != (rho < 1.0) || inverse_nonneg != (rho < 1.0)) ++disagreements;
  }
  const double secs = seconds_since(t0);
  return {disagreements == 0 && secs < 1.0,
          fmt("%g matrices, %g disagreements, %.3f s", tested, disagreements, secs)};
}

Outcome theta_window() {
  const auto t0 = std::chrono::steady_clock::now();
  const ThetaCoefficients c{0.3, 0.7, 0.1, 0.9, 1.0};
  const auto res = find_theta(c);
  bool ok = res.status == ThetaStatus::Window && res.window.has_value();
  int bad = 0;
  if (ok) {
    const auto [lo, hi] = *res.window;
    for (int i = 1; i <= 100; ++i) {
      const double th = lo + (hi - lo) * i / 101.0;
      if (!(eval_h(c, th) < 0.0) || !(spectral_radius(m_theta(c, th)) < 1.0)) ++bad;
    }
  }
  const auto inf = find_theta({0.9, 1.0, 1.0, 0.9, 1.0});
  const double secs = seconds_since(t0);
  ok = ok && bad == 0 && inf.status == ThetaStatus::Infeasible && secs < 1.0;
  return {ok, fmt("window [%.6g, %.6g], %g bad interior samples", res.window ? res.window->first : -1,
                  res.window ? res.window->second : -1, bad) +
                  ", infeasible example " + std::string(to_string(inf.status))};
}

Outcome closed_form() {
  const auto r = perov_solve_semi({2.0, 3.0, 1.0, 1.0}, SemigroupSpec::scalar(0.0, 1.0),
                                  NonlinearPair::zero(), LipschitzData{}, StateVector{1.0},
                                  TimeGrid(1.0, 256), {});
  double err = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i)
    err = std::max({err, std::abs(r.x.at(i)[0] - 2.0), std::abs(r.y.at(i)[0] - 1.0)});
  return {err < 1e-12 && r.report.defect < 1e-12,
          fmt("max deviation %.3g, defect %.3g", err, r.report.defect)};
}

Outcome oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  const Reference ref;
  const oracle::ScalarSystem sys{-1.0, f_sin, g_cos};
  const double x0_ref = oracle::shoot_x0(sys, 2.0, 1.0, 1.0, 1.0, 0.5, 4096);
  const double x0 = ref.solve(1024).x.at(0)[0];
  const double rel = std::abs(x0 - x0_ref) / std::abs(x0_ref);
  double min_order = 1e9;
  double prev_x = 0.0, prev_gap = 0.0;
  for (int n : {128, 256, 512, 1024}) {
    const double x = ref.solve(n).x.at(0)[0];
    if (n > 128) {
      const double gap = std::abs(x - prev_x);
      if (prev_gap > 0.0) min_order = std::min(min_order, std::log2(prev_gap / gap));
      prev_gap = gap;
    }
    prev_x = x;
  }
  const double secs = seconds_since(t0);
  return {rel <= 1e-6 && min_order >= 1.8 && secs < 5.0,
          fmt("relative error %.3g, observed order %.3f, %.3f s", rel, min_order, secs)};
}

Outcome rate_certificate() {
  const Reference ref;
  SolverConfig cfg;
  const auto r = ref.solve(1024, cfg);
  const NonnegMatrix2 m = build_M_semi(ref.p, ref.lip, bound_CA(ref.s), cfg.theta);
  const double rho = spectral_radius(m);
  const NonnegMatrix2 bound = m + NonnegMatrix2(0.05 * rho, 0.0, 0.0, 0.05 * rho);
  const auto& h = r.report.residual_history;
  int violations = 0;
  // History index i holds r_{i+1}; compare from m = 3 on.
  for (std::size_t i = 2; i + 1 < h.size(); ++i) {
    const auto lim = bound.apply({h[i][0], h[i][1]});
    if (h[i + 1][0] > lim[0] || h[i + 1][1] > lim[1]) ++violations;
  }
  return {violations == 0 && h.size() >= 4 && r.report.converged,
          fmt("%g residual pairs, %g violations, rho %.4f", static_cast<double>(h.size()),
              violations, rho)};
}

Outcome controllability_defect() {
  const Reference ref;
  const auto semi = ref.solve(1024);
  const auto obs = observability_solve({1.0, 1.0, 1.0, 1.0}, ref.s, ref.fg, ref.lip,
                                       TimeGrid(1.0, 256), {}, StateVector{0.0},
                                       StateVector{0.0});
  DiffusionConfig dc;
  dc.nonlinearity = make_nonlinearity("sin-cos", {0.05, 0.05});
  dc.problem = {2.0, 1.0, 1.0, 1.0};
  dc.beta = {1.0, 0.5, 0.25};
  const auto demo = run_demo(dc, TimeGrid(1.0, 512), {});
  const double bound = 100 * kTol;
  const bool within = semi.report.defect <= bound && obs.report.defect <= bound &&
                      demo.report.defect <= bound;
  // Discretization defect of the computed initial state under grid doubling.
  SolverConfig cfg;
  cfg.forward_refine = 4;
  const double d1 = *ref.solve(256, cfg).report.forward_defect;
  const double d2 = *ref.solve(512, cfg).report.forward_defect;
  const double ratio = d1 / d2;
  return {within && ratio >= 3.5,
          fmt("defects semi %.2g, observe %.2g, ", semi.report.defect, obs.report.defect) +
              fmt("diffusion %.2g; doubling ratio %.3f", demo.report.defect, ratio)};
}

Outcome localization() {
  DiffusionConfig dc;
  dc.nonlinearity = make_nonlinearity("sqrt-bounded", {0.2, 0.1, 0.1}, ConditionClass::C2);
  dc.problem = {2.0, 1.0, 1.0, 1.0};
  dc.beta = {1.0, 0.5};
  const auto demo = run_demo(dc, TimeGrid(1.0, 512), {});
  const ProblemParams& p = dc.problem;
  const auto lip = derive_constants(dc);
  const auto m = build_M_semi(p, lip, 1.0, demo.report.theta);
  const auto c = schauder_constants(p, lip, 1.0, beta_coefficients(dc).norm());
  const auto r = schauder_radii(m, c[0], c[1]);
  const bool ok = demo.report.converged &&
                  verify_localization(demo.x, demo.y, r[0], r[1], demo.report.theta);
  return {ok, fmt("radii (%.4g, %.4g), sup |x| %.4g", r[0], r[1], sup_norm(demo.x))};
}

Outcome uniqueness() {
  const Reference ref;
  SolverConfig a, b;
  a.x_guess = StateVector{0.0};
  b.x_guess = 10.0 * ref.beta;
  const auto ra = ref.solve(1024, a), rb = ref.solve(1024, b);
  const double dx = bielecki_distance(ra.x, rb.x, 0.0);
  const double dy = bielecki_distance(ra.y, rb.y, 0.0);
  return {dx <= 100 * kTol && dy <= 100 * kTol, fmt("|dx| %.3g, |dy| %.3g", dx, dy)};
}

Outcome theta_independence() {
  const Reference ref;
  const auto coeffs = semi_theta_coefficients(ref.p, ref.lip, bound_CA(ref.s));
  const auto search = find_theta(coeffs);
  if (!search.theta_best) return {false, "find_theta produced no certified theta"};
  std::vector<double> thetas{*search.theta_best};
  // theta_best is 0 when M(0) already converges; add a certified interior point.
  if (search.window) thetas.push_back(0.5 * (search.window->first + search.window->second));
  const auto base = ref.solve(1024);
  double worst = 0.0;
  std::string used;
  for (double th : thetas) {
    SolverConfig cfg;
    cfg.theta = th;
    const auto r = ref.solve(1024, cfg);
    worst = std::max({worst, bielecki_distance(base.x, r.x, 0.0),
                      bielecki_distance(base.y, r.y, 0.0)});
    used += fmt(" %.4g", th);
  }
  return {worst <= 100 * kTol, "theta" + used + fmt(": max difference %.3g", worst)};
}

Outcome diffusion_demo() {
  const auto t0 = std::chrono::steady_clock::now();
  DiffusionConfig lin;
  lin.problem = {2.0, 1.0, 1.0, 1.0};
  lin.beta = {1.0, 0.5, 0.25};
  const auto linear = run_demo(lin, TimeGrid(1.0, 512), {});
  const double e = std::exp(-kPi * kPi);
  const double expected = (1.0 - e) / (2.0 - e) * 1.0;
  const double err = std::abs(linear.x.at(0)[0] - expected);

  DiffusionConfig nl = lin;
  nl.nonlinearity = make_nonlinearity("sin-cos", {0.05, 0.05});
  const auto demo = run_demo(nl, TimeGrid(1.0, 512), {});
  const double secs = seconds_since(t0);
  return {err <= 1e-10 && demo.report.converged && demo.report.defect <= 1e-8 && secs < 10.0,
          fmt("closed-form error %.3g, nonlinear defect %.3g, %.3f s", err, demo.report.defect,
              secs)};
}

int run_cli(const std::string& args, const std::filesystem::path& out) {
  const std::string cmd =
      std::string(MUTCTL_BIN) + " " + args + " --out " + out.string() + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome observability() {
  const Reference ref;
  const auto r = observability_solve({1.0, 1.0, 1.0, 1.0}, ref.s, ref.fg, ref.lip,
                                     TimeGrid(1.0, 256), {}, StateVector{0.0}, StateVector{0.0});
  const auto mr = mild_residual(ref.s, ref.fg, r.x, r.y);
  const bool solved = r.report.converged && mr.x < 1e-9 && mr.y < 1e-9 &&
                      r.report.defect <= 100 * kTol;

  const auto dir = std::filesystem::temp_directory_path() / "mutctl_acceptance_adversarial";
  std::filesystem::remove_all(dir);
  const int code = run_cli("solve-observe --config " + std::string(MUTCTL_CONFIGS) +
                               "/observe_adversarial.json",
                           dir);
  std::ifstream kv(dir / "report.kv");
  std::string line;
  bool outer = false;
  int history = 0;
  while (std::getline(kv, line)) {
    if (line == "error_class=OuterNotConverged") outer = true;
    if (line.rfind("residual_history[", 0) == 0) ++history;
  }
  return {solved && code == 3 && outer && history >= 2,
          fmt("alpha %.6g, beta %.6g, mild residual %.2g; ", r.alpha[0], r.beta[0],
              std::max(mr.x, mr.y)) +
              fmt("adversarial exit %g with %g history rows", code, history)};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"matrix calculus equivalence", matrix_equivalence},
      {"theta-window soundness", theta_window},
      {"closed-form fidelity", closed_form},
      {"oracle equivalence (scalar)", oracle_equivalence},
      {"Perov rate certificate", rate_certificate},
      {"controllability defect", controllability_defect},
      {"localization", localization},
      {"uniqueness", uniqueness},
      {"theta-independence", theta_independence},
      {"diffusion demo", diffusion_demo},
      {"observability existence", observability},
  };
  int failed = 0, index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %2d %-30s %s  (%s)\n", index, name, o.pass ? "PASS" : "FAIL",
                o.detail.c_str());
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
