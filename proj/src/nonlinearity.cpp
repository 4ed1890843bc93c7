// Copyright 2026 The mutctl Authors
// SPDX-License-Identifier: Apache-2.0

#include "mutctl/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace mutctl {

std::string_view to_string(ConditionClass c) {
  switch (c) {
    case ConditionClass::C1: return "c1";
    case ConditionClass::C2: return "c2";
    case ConditionClass::C3: return "c3";
  }
  return "unknown";
}

ConditionClass parse_condition(std::string_view text) {
  if (text == "c1") return ConditionClass::C1;
  if (text == "c2") return ConditionClass::C2;
  if (text == "c3") return ConditionClass::C3;
  throw Error(ErrorKind::SchemaError,
              "nonlinearity.condition: expected c1, c2 or c3, got '" +
                  std::string(text) + "'");
}

GrowthMode growth_mode(ConditionClass c) {
  switch (c) {
    case ConditionClass::C1: return GrowthMode::Lipschitz;
    case ConditionClass::C2: return GrowthMode::Growth;
    case ConditionClass::C3: return GrowthMode::Mixed;
  }
  return GrowthMode::Lipschitz;
}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::vector<double> take_params(std::string_view name,
                                const std::vector<double>& given,
                                std::vector<double> defaults) {
  if (given.size() > defaults.size())
    throw Error(ErrorKind::SchemaError,
                "nonlinearity.params: '" + std::string(name) + "' takes at most " +
                    std::to_string(defaults.size()) + " parameters");
  std::copy(given.begin(), given.end(), defaults.begin());
  for (double v : defaults)
    if (!std::isfinite(v))
      throw Error(ErrorKind::RangeError, "nonlinearity.params must be finite");
  return defaults;
}

void require_nonneg(double v, const char* what) {
  if (!(v >= 0.0))
    throw Error(ErrorKind::RangeError,
                std::string("nonlinearity.params: ") + what + " must be >= 0");
}

[[noreturn]] void unsupported(std::string_view name, ConditionClass c) {
  throw Error(ErrorKind::SchemaError,
              "nonlinearity.condition: '" + std::string(name) +
                  "' does not provide constants for class " +
                  std::string(to_string(c)));
}

}  // namespace

ScalarNonlinearity make_nonlinearity(std::string_view name,
                                     const std::vector<double>& params,
                                     std::optional<ConditionClass> condition) {
  ScalarNonlinearity nl;
  nl.name = std::string(name);

  if (name == "zero") {
    take_params(name, params, {});
    nl.f = [](double, double) { return 0.0; };
    nl.g = [](double, double) { return 0.0; };
    nl.condition = condition.value_or(ConditionClass::C1);
    nl.difference_bounded = true;
    return nl;
  }

  if (name == "sin-cos" || name == "logistic") {
    const auto p = take_params(name, params, {0.1, 0.1});
    const double s1 = p[0], s2 = p[1];
    require_nonneg(s1, "s1");
    require_nonneg(s2, "s2");
    const bool logistic = name == "logistic";
    if (logistic) {
      nl.f = [s1](double, double q) { return s1 * sigmoid(q); };
      nl.g = [s2](double pp, double) { return s2 * sigmoid(pp); };
    } else {
      nl.f = [s1](double, double q) { return s1 * std::sin(q); };
      nl.g = [s2](double pp, double) { return s2 * std::cos(pp); };
    }
    nl.condition = condition.value_or(ConditionClass::C1);
    nl.difference_bounded = true;
    nl.c_f = s1;
    nl.c_g = s2;
    const double slope = logistic ? 0.25 : 1.0;
    switch (nl.condition) {
      case ConditionClass::C1:
        nl.a12 = slope * s1;
        nl.a21 = slope * s2;
        break;
      case ConditionClass::C2:
        // Bounded: zero slopes, offsets carry the bound.
        break;
      case ConditionClass::C3:
        nl.a21 = slope * s2;
        break;
    }
    return nl;
  }

  if (name == "sqrt-bounded") {
    const auto p = take_params(name, params, {0.2, 0.1, 0.1});
    const double s1 = p[0], s2 = p[1], c0 = p[2];
    require_nonneg(s1, "s1");
    require_nonneg(s2, "s2");
    nl.f = [s1, c0](double pp, double) { return s1 * std::sqrt(std::abs(pp)) + c0; };
    nl.g = [s2](double pp, double) { return s2 * std::sin(pp); };
    nl.condition = condition.value_or(ConditionClass::C3);
    // sqrt|p| <= |p| + 1/4, so |f| <= s1 |p| + s1/4 + |c0|.
    nl.a11 = s1;
    nl.c_f = 0.25 * s1 + std::abs(c0);
    nl.c_g = s2;
    // f - kg is unbounded whenever s1 > 0.
    nl.difference_bounded = s1 == 0.0;
    switch (nl.condition) {
      case ConditionClass::C1:
        if (s1 > 0.0) unsupported(name, ConditionClass::C1);
        nl.a21 = s2;
        break;
      case ConditionClass::C2:
        break;
      case ConditionClass::C3:
        nl.a21 = s2;
        break;
    }
    return nl;
  }

  throw Error(ErrorKind::SchemaError,
              "nonlinearity.name: unknown builtin '" + std::string(name) + "'");
}

std::vector<std::string> nonlinearity_names() {
  return {"zero", "sin-cos", "logistic", "sqrt-bounded"};
}

double spot_check(const ScalarNonlinearity& nl, double box, int samples,
                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-box, box);
  const bool f_lipschitz = nl.condition == ConditionClass::C1;
  const bool g_lipschitz = nl.condition != ConditionClass::C2;
  double worst = 0.0;
  const auto check = [&](const ScalarNonlinearity::Fn& fn, bool lipschitz,
                         double c_p, double c_q, double offset, double p,
                         double q, double p2, double q2) {
    const double excess =
        lipschitz ? std::abs(fn(p, q) - fn(p2, q2)) - c_p * std::abs(p - p2) -
                        c_q * std::abs(q - q2)
                  : std::abs(fn(p, q)) - c_p * std::abs(p) - c_q * std::abs(q) - offset;
    worst = std::max(worst, excess);
  };
  for (int i = 0; i < samples; ++i) {
    const double p = u(rng), q = u(rng), p2 = u(rng), q2 = u(rng);
    check(nl.f, f_lipschitz, nl.a11, nl.a12, nl.c_f, p, q, p2, q2);
    check(nl.g, g_lipschitz, nl.a21, nl.a22, nl.c_g, p, q, p2, q2);
  }
  // Rounding in the evaluations themselves.
  return worst > 1e-12 ? worst : 0.0;
}

NonlinearPair componentwise(const ScalarNonlinearity& nl) {
  auto f = nl.f;
  auto g = nl.g;
  NonlinearPair fg;
  fg.eval = [f, g](std::span<const double> x, std::span<const double> y,
                   std::span<double> fo, std::span<double> go) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      fo[i] = f(x[i], y[i]);
      go[i] = g(x[i], y[i]);
    }
  };
  fg.difference_bounded = nl.difference_bounded;
  return fg;
}

LipschitzData componentwise_constants(const ScalarNonlinearity& nl, std::size_t dim) {
  const double lift = std::sqrt(static_cast<double>(dim));
  LipschitzData lip;
  lip.a11 = nl.a11;
  lip.a12 = nl.a12;
  lip.a21 = nl.a21;
  lip.a22 = nl.a22;
  lip.g13 = nl.c_f * lift;
  lip.g23 = nl.c_g * lift;
  lip.mode = growth_mode(nl.condition);
  return lip;
}

}  // namespace mutctl
