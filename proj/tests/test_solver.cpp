// Copyright 2026 The mutctl Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <vector>

#include "doctest.h"
#include "mutctl/nonlinearity.hpp"
#include "mutctl/solver.hpp"
#include "oracles/direct_operator.hpp"
#include "oracles/random.hpp"
#include "oracles/scalar_ode.hpp"

using namespace mutctl;

namespace {

// Scalar pair written out by hand; the registry is tested separately.
NonlinearPair scalar_pair(double (*f)(double, double), double (*g)(double, double),
                          bool bounded = true) {
  return NonlinearPair::from_components(
      [f](std::span<const double> x, std::span<const double> y, std::span<double> o) {
        for (std::size_t i = 0; i < o.size(); ++i) o[i] = f(x[i], y[i]);
      },
      [g](std::span<const double> x, std::span<const double> y, std::span<double> o) {
        for (std::size_t i = 0; i < o.size(); ++i) o[i] = g(x[i], y[i]);
      },
      bounded);
}

double f_sin(double, double y) { return 0.1 * std::sin(y); }
double g_cos(double x, double) { return 0.1 * std::cos(x); }

// The reference problem: lambda = -1, a = 2, b = 1, k = 1, T = 1, beta = 0.5.
struct Reference {
  ProblemParams p{2.0, 1.0, 1.0, 1.0};
  SemigroupSpec s = SemigroupSpec::scalar(-1.0, 1.0);
  NonlinearPair fg = scalar_pair(f_sin, g_cos);
  LipschitzData lip{0.0, 0.1, 0.1, 0.0, 0.0, 0.0, GrowthMode::Lipschitz};
  StateVector beta{0.5};

  SolveResult solve(int n, SolverConfig cfg = {}) const {
    return perov_solve_semi(p, s, fg, lip, beta, TimeGrid(p.T, n), cfg);
  }
};

double max_diff(const Trajectory& u, const Trajectory& v) {
  return bielecki_distance(u, v, 0.0);
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("zero nonlinearity with the identity semigroup") {
  // x(0) = k(b - 1) beta / (a - 1) = 2, then x and y are constant.
  const ProblemParams p{2.0, 3.0, 1.0, 1.0};
  const auto r = perov_solve_semi(p, SemigroupSpec::scalar(0.0, 1.0), NonlinearPair::zero(),
                                  LipschitzData{}, StateVector{1.0}, TimeGrid(1.0, 64), {});
  for (std::size_t i = 0; i < r.x.size(); ++i) {
    CHECK(r.x.at(i)[0] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(r.y.at(i)[0] == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK(r.report.defect < 1e-12);
  CHECK(r.report.converged);
  CHECK(r.report.method == "perov-semi");
}

TEST_CASE("zero nonlinearity with a decaying scalar semigroup") {
  const ProblemParams p{2.0, 1.0, 1.0, 1.0};
  const double e = std::exp(-1.0);
  const double x0 = (1.0 - e) * 0.5 / (2.0 - e);
  const auto r = perov_solve_semi(p, SemigroupSpec::scalar(-1.0, 1.0), NonlinearPair::zero(),
                                  LipschitzData{}, StateVector{0.5}, TimeGrid(1.0, 100), {});
  CHECK(r.x.at(0)[0] == doctest::Approx(x0).epsilon(1e-13));
  for (int i = 0; i <= 100; ++i)
    CHECK(r.x.at(i)[0] == doctest::Approx(x0 * std::exp(-i / 100.0)).epsilon(1e-13));
  CHECK(r.report.defect < 1e-12);
}

TEST_CASE("semi certificate for the reference problem") {
  const Reference ref;
  const auto c = semi_theta_coefficients(ref.p, ref.lip, 1.0);
  // 1/a + k T a21 / a, (1 + 1/a) a12, T a21, a22
  CHECK(c.a11 == doctest::Approx(0.55));
  CHECK(c.a12 == doctest::Approx(0.15));
  CHECK(c.a21 == doctest::Approx(0.1));
  CHECK(c.a22 == 0.0);
  const auto m = build_M_semi(ref.p, ref.lip, 1.0, 0.0);
  CHECK(m.a11() == doctest::Approx(0.55));
  CHECK(m.a12() == doctest::Approx(0.15));
  CHECK(m.a21() == doctest::Approx(0.1));
  CHECK(m.a22() == 0.0);
  CHECK(spectral_radius(m) == doctest::Approx((0.55 + std::sqrt(0.3025 + 0.06)) / 2));
  CHECK(spectral_radius(m) == doctest::Approx(0.576).epsilon(1e-3));
}

TEST_CASE("invariant-set radii and constants") {
  const auto r = schauder_radii({0.5, 0.0, 0.0, 0.5}, 1.0, 2.0);
  CHECK(r[0] == doctest::Approx(2.0));
  CHECK(r[1] == doctest::Approx(4.0));
  CHECK_THROWS_AS(schauder_radii({0.5, 0.0, 0.0, 0.5}, -1.0, 0.0), Error);
  CHECK(kind_of([] { schauder_radii(NonnegMatrix2::identity(), 1.0, 1.0); }) ==
        ErrorKind::SingularOrNotConvergent);

  LipschitzData lip;
  lip.g13 = 0.1;
  lip.g23 = 0.2;
  const auto c = schauder_constants({2.0, 1.0, 1.0, 1.0}, lip, 1.0, 0.5);
  CHECK(c[0] == doctest::Approx(0.75));
  CHECK(c[1] == doctest::Approx(0.7));
  const auto cT = schauder_constants({2.0, 1.0, 1.0, 2.0}, lip, 1.0, 0.5, true);
  // 0.5 * 2 * 0.5 + 0.5 * 2 * 0.2 + 1.5 * 0.1 * 2
  CHECK(cT[0] == doctest::Approx(0.5 + 0.2 + 0.3));
}

TEST_CASE("localization check examples") {
  const TimeGrid g(1.0, 4);
  const auto x = Trajectory::constant(g, StateVector{1.0});
  Trajectory y(g, 1);
  for (int i = 0; i <= 4; ++i) y.at(i)[0] = std::exp(g.node(i));
  CHECK(verify_localization(x, y, 1.0, 1.0, 1.0));
  CHECK_FALSE(verify_localization(x, y, 0.99, 1.0, 1.0));
  CHECK_FALSE(verify_localization(x, y, 1.0, 1.0, 0.5));
}

TEST_CASE("control defect examples") {
  const TimeGrid g(1.0, 2);
  const ProblemParams p{2.0, 3.0, 1.0, 1.0};
  const auto one = Trajectory::constant(g, StateVector{1.0});
  // 1 - 2 - (1 - 3)
  CHECK(control_defect(p, one, one) == 1.0);
  const auto two = Trajectory::constant(g, StateVector{2.0});
  CHECK(control_defect(p, two, one) == 0.0);
  const auto run = running_defect(p, two, one);
  REQUIRE(run.size() == 3);
  CHECK(run[0] == 0.0);
  CHECK(run[2] == 0.0);
}

TEST_CASE("semi operator agrees with the direct evaluation") {
  const Reference ref;
  const int n = 2048;
  const TimeGrid g(1.0, n);
  Trajectory x(g, 1), y(g, 1);
  std::vector<double> xv(n + 1), yv(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double t = g.node(i);
    xv[i] = x.at(i)[0] = 0.3 + std::cos(3.0 * t);
    yv[i] = y.at(i)[0] = 0.5 * std::exp(-t) + 0.2 * t * t;
  }
  const auto [n1, n2] = apply_N_semi(ref.p, ref.s, ref.fg, ref.beta, x, y);
  const oracle::DirectScalar direct{-1.0, 2.0, 1.0, 1.0, 1.0, f_sin, g_cos};
  std::vector<double> o1, o2;
  direct.semi(0.5, xv, yv, o1, o2);
  for (int i = 0; i <= n; i += 64) {
    CHECK(n1.at(i)[0] == doctest::Approx(o1[i]).epsilon(1e-12));
    CHECK(n2.at(i)[0] == doctest::Approx(o2[i]).epsilon(1e-12));
  }
  CHECK(n2.at(0)[0] == 0.5);
}

TEST_CASE("observability operator agrees with the direct evaluation") {
  const ProblemParams p{1.5, 0.8, 2.0, 1.0};
  const int n = 512;
  const TimeGrid g(1.0, n);
  Trajectory x(g, 1), y(g, 1);
  std::vector<double> xv(n + 1), yv(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double t = g.node(i);
    xv[i] = x.at(i)[0] = std::sin(2.0 * t);
    yv[i] = y.at(i)[0] = 1.0 - t;
  }
  const auto [n1, n2] = apply_N_obs(p, SemigroupSpec::scalar(-0.5, 1.0),
                                    scalar_pair(f_sin, g_cos), StateVector{0.3},
                                    StateVector{-0.2}, x, y);
  const oracle::DirectScalar direct{-0.5, 1.5, 0.8, 2.0, 1.0, f_sin, g_cos};
  std::vector<double> o1, o2;
  direct.observe(0.3, -0.2, xv, yv, o1, o2);
  for (int i = 0; i <= n; i += 16) {
    CHECK(n1.at(i)[0] == doctest::Approx(o1[i]).epsilon(1e-12));
    CHECK(n2.at(i)[0] == doctest::Approx(o2[i]).epsilon(1e-12));
  }
}

TEST_CASE("reference problem matches RK4 shooting") {
  const Reference ref;
  const oracle::ScalarSystem sys{-1.0, f_sin, g_cos};
  const double x0_ref = oracle::shoot_x0(sys, 2.0, 1.0, 1.0, 1.0, 0.5, 4096);
  const auto r = ref.solve(1024);
  CHECK(std::abs(r.x.at(0)[0] - x0_ref) <= 1e-6 * std::abs(x0_ref));
  CHECK(r.report.defect <= 100 * 1e-10);
  REQUIRE(r.report.forward_defect);
  CHECK(*r.report.forward_defect < 1e-7);  // second-order grid error in x(0)
}

TEST_CASE("grid refinement converges at second order") {
  const Reference ref;
  std::vector<double> x0;
  for (int n : {128, 256, 512, 1024}) x0.push_back(ref.solve(n).x.at(0)[0]);
  for (std::size_t i = 0; i + 2 < x0.size(); ++i) {
    const double order = std::log2(std::abs(x0[i] - x0[i + 1]) / std::abs(x0[i + 1] - x0[i + 2]));
    CAPTURE(i);
    CHECK(order >= 1.8);
  }
}

TEST_CASE("residual pairs contract by the certificate") {
  const Reference ref;
  SolverConfig cfg;
  const auto r = ref.solve(1024, cfg);
  const NonnegMatrix2 m = build_M_semi(ref.p, ref.lip, 1.0, cfg.theta);
  const double rho = spectral_radius(m);
  const NonnegMatrix2 bound = m + NonnegMatrix2(0.05 * rho, 0.0, 0.0, 0.05 * rho);
  const auto& h = r.report.residual_history;
  REQUIRE(h.size() >= 5);
  for (std::size_t i = 2; i + 1 < h.size(); ++i) {
    const auto lim = bound.apply({h[i][0], h[i][1]});
    CAPTURE(i);
    CHECK(h[i + 1][0] <= lim[0]);
    CHECK(h[i + 1][1] <= lim[1]);
  }
}

TEST_CASE("fixed point does not depend on the initial guess or theta") {
  const Reference ref;
  SolverConfig zero_guess;
  zero_guess.x_guess = StateVector{0.0};
  SolverConfig far_guess;
  far_guess.x_guess = StateVector{5.0};  // 10 beta
  const auto a = ref.solve(512, zero_guess);
  const auto b = ref.solve(512, far_guess);
  CHECK(max_diff(a.x, b.x) <= 100 * 1e-10);
  CHECK(max_diff(a.y, b.y) <= 100 * 1e-10);

  for (double theta : {0.5, 2.0}) {
    SolverConfig cfg;
    cfg.theta = theta;
    const auto c = ref.solve(512, cfg);
    CHECK(c.report.theta == theta);
    CHECK(max_diff(a.x, c.x) <= 100 * 1e-10);
    CHECK(max_diff(a.y, c.y) <= 100 * 1e-10);
  }
}

TEST_CASE("alternating scheme agrees with Perov") {
  const Reference ref;
  const TimeGrid g(1.0, 512);
  const auto perov = ref.solve(512);
  const auto alt = avramescu_solve_semi(ref.p, ref.s, ref.fg, ref.lip, ref.beta, g, {});
  CHECK(alt.report.method == "avramescu-semi");
  CHECK(alt.report.converged);
  CHECK(max_diff(perov.x, alt.x) <= 1e-8);
  CHECK(max_diff(perov.y, alt.y) <= 1e-8);
  REQUIRE(alt.report.radii);
  REQUIRE(alt.report.localized);
  CHECK(*alt.report.localized);
}

TEST_CASE("sqrt growth nonlinearity converges under both growth schemes") {
  const auto nl3 = make_nonlinearity("sqrt-bounded", {0.2, 0.1, 0.1}, ConditionClass::C3);
  const ProblemParams p{2.0, 1.0, 1.0, 1.0};
  const auto s = SemigroupSpec::scalar(-1.0, 1.0);
  const TimeGrid g(1.0, 256);
  const auto alt = avramescu_solve_semi(p, s, componentwise(nl3), componentwise_constants(nl3, 1),
                                        StateVector{0.5}, g, {});
  CHECK(alt.report.converged);
  CHECK(alt.report.defect <= 100 * 1e-10);
  CHECK(mild_residual(s, componentwise(nl3), alt.x, alt.y).x < 10 * 1e-10);

  const auto nl2 = make_nonlinearity("sqrt-bounded", {0.2, 0.1, 0.1}, ConditionClass::C2);
  const auto sch = schauder_solve_semi(p, s, componentwise(nl2), componentwise_constants(nl2, 1),
                                       StateVector{0.5}, g, {});
  CHECK(sch.report.method == "schauder-semi");
  CHECK(sch.report.defect <= 100 * 1e-10);
  REQUIRE(sch.report.localized);
  CHECK(*sch.report.localized);
  CHECK(max_diff(sch.x, alt.x) < 1e-8);
}

TEST_CASE("certificate failures are reported as typed errors") {
  const Reference ref;
  const TimeGrid g(1.0, 64);
  LipschitzData big{0.0, 5.0, 5.0, 0.0, 0.0, 0.0, GrowthMode::Lipschitz};
  try {
    perov_solve_semi(ref.p, ref.s, ref.fg, big, ref.beta, g, {});
    FAIL("expected MatrixNotConvergent");
  } catch (const SolveError& e) {
    CHECK(e.kind() == ErrorKind::MatrixNotConvergent);
    REQUIRE(e.report().rho);
    CHECK(*e.report().rho >= 1.0);
  }
  LipschitzData stiff{0.0, 0.0, 0.0, 2.0, 0.0, 0.0, GrowthMode::Mixed};
  CHECK(kind_of([&] { avramescu_solve_semi(ref.p, ref.s, ref.fg, stiff, ref.beta, g, {}); }) ==
        ErrorKind::InnerNotContractive);
  CHECK(kind_of([&] { perov_solve_semi({-1.0, 1.0, 1.0, 1.0}, ref.s, ref.fg, ref.lip,
                                       ref.beta, g, {}); }) == ErrorKind::RangeError);
  CHECK(kind_of([&] { perov_solve_semi(ref.p, ref.s, ref.fg, ref.lip, StateVector{1.0, 2.0},
                                       g, {}); }) == ErrorKind::DimensionMismatch);
  SolverConfig few;
  few.max_iter = 2;
  CHECK(kind_of([&] { ref.solve(64, few); }) == ErrorKind::MaxIterExceeded);
}

TEST_CASE("linear observability family settles at the mean") {
  // Without nonlinearity, a = b = 2, k = 1: H preserves alpha + beta and
  // scales alpha - beta by S(T) - 1, so the limit is alpha = beta = 1/2.
  const ProblemParams p{2.0, 2.0, 1.0, 1.0};
  const auto r = observability_solve(p, SemigroupSpec::scalar(-1.0, 1.0), NonlinearPair::zero(),
                                     LipschitzData{}, TimeGrid(1.0, 64), {}, StateVector{1.0},
                                     StateVector{0.0});
  CHECK(r.alpha[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(r.beta[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(r.report.defect < 1e-9);
  CHECK(r.report.converged);
}

TEST_CASE("scalar observability example converges to a mild solution") {
  const ProblemParams p{1.0, 1.0, 1.0, 1.0};
  const auto s = SemigroupSpec::scalar(-1.0, 1.0);
  const auto fg = scalar_pair(f_sin, g_cos);
  const LipschitzData lip{0.0, 0.1, 0.1, 0.0, 0.0, 0.0, GrowthMode::Lipschitz};
  const auto r = observability_solve(p, s, fg, lip, TimeGrid(1.0, 256), {}, StateVector{0.0},
                                     StateVector{0.0});
  CHECK(r.report.converged);
  CHECK(r.report.warnings.empty());
  CHECK(r.report.defect <= 100 * 1e-10);
  const auto mr = mild_residual(s, fg, r.x, r.y);
  CHECK(mr.x < 1e-12);
  CHECK(mr.y < 1e-12);
  CHECK(r.alpha[0] == r.x.at(0)[0]);
  CHECK(r.beta[0] == r.y.at(0)[0]);
  // The pair is a fixed point of the operator built from its own initial states.
  const auto [n1, n2] = apply_N_obs(p, s, fg, r.alpha, r.beta, r.x, r.y);
  CHECK(max_diff(n1, r.x) < 1e-9);
  CHECK(max_diff(n2, r.y) < 1e-9);
}

TEST_CASE("adversarial observability run keeps its residual history") {
  const ProblemParams p{0.5, 0.5, 1.0, 1.0};
  const auto s = SemigroupSpec::scalar(0.0, 1.0);
  const auto nl = make_nonlinearity("sin-cos", {0.15, 0.15});
  SolverConfig cfg;
  cfg.relaxation = 1.0;
  cfg.max_iter = 200;
  try {
    observability_solve(p, s, componentwise(nl), componentwise_constants(nl, 1),
                        TimeGrid(1.0, 128), cfg, StateVector{0.1}, StateVector{0.0});
    FAIL("expected OuterNotConverged");
  } catch (const SolveError& e) {
    CHECK(e.kind() == ErrorKind::OuterNotConverged);
    CHECK(e.report().residual_history.size() >= 2);
    CHECK(static_cast<int>(e.report().residual_history.size()) == e.report().iterations);
    CHECK_FALSE(e.report().converged);
  }
}

TEST_CASE("observability certificate entries") {
  const ProblemParams p{2.0, 4.0, 0.5, 1.0};
  const LipschitzData lip{0.1, 0.2, 0.3, 0.4, 0.0, 0.0, GrowthMode::Lipschitz};
  const auto m = build_M_obs(p, lip, 1.0);
  // col1 = a11 + k a21 = 0.25, col2 = a12 + k a22 = 0.4, 1/a = 0.5, 1/(kb) = 0.5
  CHECK(m.a11() == doctest::Approx(0.125 + 0.1));
  CHECK(m.a12() == doctest::Approx(0.2 + 0.2));
  CHECK(m.a21() == doctest::Approx(0.125 + 0.3));
  CHECK(m.a22() == doctest::Approx(0.2 + 0.4));
}

TEST_CASE("forward defect is exact for linear flows") {
  // With f = g = 0 the exponential integrator reproduces S(t) exactly.
  const ProblemParams p{2.0, 1.0, 1.0, 1.0};
  const double e = std::exp(-1.0);
  const StateVector x0{(1.0 - e) * 0.5 / (2.0 - e)};
  const auto s = SemigroupSpec::scalar(-1.0, 1.0);
  for (int n : {1, 7, 64})
    CHECK(forward_defect(p, s, NonlinearPair::zero(), x0, StateVector{0.5}, n) < 1e-15);
  CHECK(forward_defect(p, s, NonlinearPair::zero(), StateVector{0.0}, StateVector{0.5}, 4) ==
        doctest::Approx(0.5 * (1.0 - e)));
}
