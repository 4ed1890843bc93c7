// Copyright 2026 The mutctl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Reference solutions for the scalar system
//   x' = lambda x + f(x, y),  y' = lambda y + g(x, y)
// by classical RK4 on the differential form and root finding on the initial
// state. Shares no code with the library.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>

namespace oracle {

using Fn = std::function<double(double, double)>;

struct ScalarSystem {
  double lambda;
  Fn f;
  Fn g;
};

/// (x(T), y(T)) from (x0, y0) with n classical RK4 steps.
inline std::pair<double, double> rk4(const ScalarSystem& s, double x0, double y0,
                                     double T, int n) {
  const double h = T / n;
  double x = x0, y = y0;
  const auto fx = [&](double a, double b) { return s.lambda * a + s.f(a, b); };
  const auto fy = [&](double a, double b) { return s.lambda * b + s.g(a, b); };
  for (int i = 0; i < n; ++i) {
    const double k1x = fx(x, y), k1y = fy(x, y);
    const double k2x = fx(x + 0.5 * h * k1x, y + 0.5 * h * k1y);
    const double k2y = fy(x + 0.5 * h * k1x, y + 0.5 * h * k1y);
    const double k3x = fx(x + 0.5 * h * k2x, y + 0.5 * h * k2y);
    const double k3y = fy(x + 0.5 * h * k2x, y + 0.5 * h * k2y);
    const double k4x = fx(x + h * k3x, y + h * k3y);
    const double k4y = fy(x + h * k3x, y + h * k3y);
    x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
  }
  return {x, y};
}

/// Residual of x(T) - a x0 - k (y(T) - b y0) along the RK4 flow.
inline double condition(const ScalarSystem& s, double a, double b, double k, double T,
                        double x0, double y0, int n) {
  const auto [xT, yT] = rk4(s, x0, y0, T, n);
  return xT - a * x0 - k * (yT - b * y0);
}

/// x(0) solving the proportionality condition with y(0) = beta. Brackets the
/// root by outward stepping from x_start, then bisects to machine precision.
inline double shoot_x0(const ScalarSystem& s, double a, double b, double k, double T,
                       double beta, int n, double x_start = 0.0) {
  const auto r = [&](double x0) { return condition(s, a, b, k, T, x0, beta, n); };
  double lo = x_start - 1.0, hi = x_start + 1.0;
  for (int i = 0; i < 60 && r(lo) * r(hi) > 0.0; ++i) {
    lo -= (hi - lo);
    hi += (hi - lo);
  }
  double rlo = r(lo);
  if (rlo * r(hi) > 0.0) throw std::runtime_error("shoot_x0: no sign change");
  for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double rm = r(mid);
    if (rm == 0.0) return mid;
    if ((rm < 0.0) == (rlo < 0.0)) {
      lo = mid;
      rlo = rm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracle
