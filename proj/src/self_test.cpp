// Copyright 2026 The mutctl Authors
// SPDX-License-Identifier: Apache-2.0

// Fast built-in checks with known answers, runnable from the installed binary.

#include <cmath>
#include <functional>
#include <ostream>
#include <random>

#include "mutctl/kernels.hpp"
#include "mutctl/run.hpp"

namespace mutctl {

namespace {

bool kernels_agree() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto& ref = kernels::detail::scalar_table();
  for (kernels::Backend b : kernels::available_backends()) {
    const kernels::KernelTable* t = kernels::table_for(b);
    for (std::size_t n : {1u, 3u, 8u, 17u, 64u, 255u}) {
      std::vector<double> x(n), y(n), a(n * 5), o1(5), o2(5);
      for (auto& v : x) v = u(rng);
      for (auto& v : y) v = u(rng);
      for (auto& v : a) v = u(rng);
      const double scale = static_cast<double>(n) * 1e-15;
      if (std::abs(t->dot(x.data(), y.data(), n) - ref.dot(x.data(), y.data(), n)) > scale)
        return false;
      ref.gemv(a.data(), 5, n, x.data(), o1.data());
      t->gemv(a.data(), 5, n, x.data(), o2.data());
      for (int i = 0; i < 5; ++i)
        if (std::abs(o1[i] - o2[i]) > scale) return false;
    }
  }
  return true;
}

bool spectral_radius_example() {
  // (tr + sqrt(tr^2 - 4 det)) / 2 with tr = 0.8, det = 0.13.
  const double expected = 0.5 * (0.8 + std::sqrt(0.64 - 0.52));
  return std::abs(spectral_radius({0.5, 0.2, 0.1, 0.3}) - expected) < 1e-12 &&
         is_convergent_to_zero({0.5, 0.2, 0.1, 0.3}) &&
         !is_convergent_to_zero(NonnegMatrix2::identity());
}

bool theta_window_example() {
  const auto w = find_theta({0.3, 0.7, 0.1, 0.9, 1.0});
  const auto inf = find_theta({0.9, 1.0, 1.0, 0.9, 1.0});
  return w.status == ThetaStatus::Window && w.window && w.window->first < 0.1 &&
         inf.status == ThetaStatus::Infeasible;
}

bool heat_mode_example() {
  const auto s = SemigroupSpec::heat1d(1.0, 4, 1.0, 1.0);
  const StateVector v = apply(s, 0.1, StateVector::basis(4, 0));
  const double pi = std::acos(-1.0);
  return std::abs(v[0] - std::exp(-pi * pi * 0.1)) < 1e-14 && v[1] == 0.0;
}

bool closed_form_semi() {
  const ProblemParams p{2.0, 3.0, 1.0, 1.0};
  const auto r = perov_solve_semi(p, SemigroupSpec::scalar(0.0, 1.0), NonlinearPair::zero(),
                                  LipschitzData{}, StateVector{1.0}, TimeGrid(1.0, 64),
                                  SolverConfig{});
  for (std::size_t i = 0; i < r.x.size(); ++i)
    if (std::abs(r.x.at(i)[0] - 2.0) > 1e-12 || std::abs(r.y.at(i)[0] - 1.0) > 1e-12)
      return false;
  return r.report.defect < 1e-12;
}

bool trivial_observability() {
  const ProblemParams p{2.0, 2.0, 1.0, 1.0};
  const auto r = observability_solve(p, SemigroupSpec::scalar(-1.0, 1.0),
                                     NonlinearPair::zero(), LipschitzData{},
                                     TimeGrid(1.0, 32), SolverConfig{}, StateVector{0.0},
                                     StateVector{0.0});
  return r.report.iterations == 1 && r.alpha[0] == 0.0 && r.beta[0] == 0.0;
}

}  // namespace

bool self_test(Report& report, std::ostream& log) {
  const std::pair<const char*, std::function<bool()>> checks[] = {
      {"kernel_backends_agree", kernels_agree},
      {"spectral_radius_example", spectral_radius_example},
      {"theta_window_example", theta_window_example},
      {"heat_mode_decay", heat_mode_example},
      {"closed_form_semi", closed_form_semi},
      {"trivial_observability", trivial_observability},
  };
  bool all = true;
  for (const auto& [name, fn] : checks) {
    bool ok = false;
    try {
      ok = fn();
    } catch (const std::exception&) {
      ok = false;
    }
    all = all && ok;
    report.set(std::string("check.") + name, ok);
    log << "self-test " << name << ": " << (ok ? "PASS" : "FAIL") << '\n';
  }
  return all;
}

}  // namespace mutctl
