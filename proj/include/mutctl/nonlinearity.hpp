// Copyright 2026 The mutctl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Builtin scalar nonlinearities (f(p, q), g(p, q)) with their declared
// constants, and their componentwise lift to R^n.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mutctl/solver.hpp"

namespace mutctl {

/// c1: F and G Lipschitz. c2: F and G of linear growth.
/// c3: F of linear growth, G Lipschitz.
enum class ConditionClass { C1, C2, C3 };
std::string_view to_string(ConditionClass c);
/// Accepts "c1", "c2", "c3"; throws Error(SchemaError) otherwise.
ConditionClass parse_condition(std::string_view text);
GrowthMode growth_mode(ConditionClass c);

struct ScalarNonlinearity {
  using Fn = std::function<double(double p, double q)>;

  std::string name;
  Fn f;
  Fn g;
  ConditionClass condition = ConditionClass::C1;
  // Lipschitz constants (c1, and G in c3) or growth slopes (c2, and F in c3):
  //   |f(p,q) - f(p',q')| <= a11 |p-p'| + a12 |q-q'|   or
  //   |f(p,q)| <= a11 |p| + a12 |q| + c_f,
  // and likewise for g with a21, a22, c_g.
  double a11 = 0.0;
  double a12 = 0.0;
  double a21 = 0.0;
  double a22 = 0.0;
  double c_f = 0.0;
  double c_g = 0.0;
  /// f - k g bounded on R^2 for every k.
  bool difference_bounded = false;
};

/// Registry lookup. Parameters (missing trailing ones take defaults):
///   zero         -
///   sin-cos      s1, s2          f = s1 sin q, g = s2 cos p
///   logistic     s1, s2          f = s1 sigma(q), g = s2 sigma(p)
///   sqrt-bounded s1, s2, c0      f = s1 sqrt|p| + c0, g = s2 sin p
/// `condition` selects which constants are declared; entries reject classes
/// they cannot serve. Throws Error(SchemaError) on unknown names or surplus
/// parameters, Error(RangeError) on negative scales.
ScalarNonlinearity make_nonlinearity(std::string_view name,
                                     const std::vector<double>& params,
                                     std::optional<ConditionClass> condition = {});

std::vector<std::string> nonlinearity_names();

/// Samples `samples` points of [-box, box]^4 with a fixed seed and checks the
/// declared constants against the condition class. Returns the largest
/// violation (0 when every sample satisfies the bound).
double spot_check(const ScalarNonlinearity& nl, double box, int samples,
                  std::uint64_t seed);

/// F(x, y)_i = f(x_i, y_i), G(x, y)_i = g(x_i, y_i).
NonlinearPair componentwise(const ScalarNonlinearity& nl);

/// Constants of componentwise() in the Euclidean norm of R^dim: Lipschitz and
/// growth slopes are unchanged, growth offsets scale by sqrt(dim).
LipschitzData componentwise_constants(const ScalarNonlinearity& nl, std::size_t dim);

}  // namespace mutctl
