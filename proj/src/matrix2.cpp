// Copyright 2026 The mutctl Authors
// SPDX-License-Identifier: Apache-2.0

#include "mutctl/matrix2.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "mutctl/error.hpp"

namespace mutctl {

NonnegMatrix2::NonnegMatrix2(double a11, double a12, double a21, double a22)
    : a11_(a11), a12_(a12), a21_(a21), a22_(a22) {
  for (double v : {a11, a12, a21, a22}) {
    if (!std::isfinite(v) || v < 0.0)
      throw Error(ErrorKind::InvalidArgument,
                  "NonnegMatrix2 entries must be finite and >= 0, got " +
                      std::to_string(v));
  }
}

double NonnegMatrix2::operator()(int row, int col) const {
  if (row == 0) return col == 0 ? a11_ : a12_;
  return col == 0 ? a21_ : a22_;
}

std::array<double, 2> NonnegMatrix2::apply(const std::array<double, 2>& v) const {
  return {a11_ * v[0] + a12_ * v[1], a21_ * v[0] + a22_ * v[1]};
}

NonnegMatrix2 NonnegMatrix2::operator*(const NonnegMatrix2& r) const {
  return {a11_ * r.a11_ + a12_ * r.a21_, a11_ * r.a12_ + a12_ * r.a22_,
          a21_ * r.a11_ + a22_ * r.a21_, a21_ * r.a12_ + a22_ * r.a22_};
}

NonnegMatrix2 NonnegMatrix2::operator+(const NonnegMatrix2& r) const {
  return {a11_ + r.a11_, a12_ + r.a12_, a21_ + r.a21_, a22_ + r.a22_};
}

NonnegMatrix2 NonnegMatrix2::scaled(double s) const {
  return {s * a11_, s * a12_, s * a21_, s * a22_};
}

double spectral_radius(const NonnegMatrix2& m) {
  const double tr = m.trace();
  // tr^2 - 4 det written without cancellation.
  const double diff = m.a11() - m.a22();
  const double disc = diff * diff + 4.0 * m.a12() * m.a21();
  if (disc < 0.0) return std::sqrt(std::max(0.0, m.det()));
  const double root = std::sqrt(disc);
  return std::max(std::abs(0.5 * (tr + root)), std::abs(0.5 * (tr - root)));
}

bool is_convergent_to_zero(const NonnegMatrix2& m) {
  if (!(m.a11() < 1.0) || !(m.a22() < 1.0)) return false;
  // a11 + a22 < 1 + a11 a22 - a12 a21, factored.
  return (1.0 - m.a11()) * (1.0 - m.a22()) > m.a12() * m.a21();
}

NonnegMatrix2 inverse_I_minus(const NonnegMatrix2& m) {
  if (!is_convergent_to_zero(m))
    throw Error(ErrorKind::SingularOrNotConvergent,
                "I - M is not invertible with a nonnegative inverse: M is not "
                "convergent to zero");
  const double det = (1.0 - m.a11()) * (1.0 - m.a22()) - m.a12() * m.a21();
  return {(1.0 - m.a22()) / det, m.a12() / det, m.a21() / det,
          (1.0 - m.a11()) / det};
}

NonnegMatrix2 power(const NonnegMatrix2& m, unsigned p) {
  NonnegMatrix2 result = NonnegMatrix2::identity();
  NonnegMatrix2 base = m;
  while (p != 0) {
    if (p & 1u) result = result * base;
    base = base * base;
    p >>= 1u;
  }
  return result;
}

// ---------------------------------------------------------------------------

namespace {
constexpr double kTaylorCutoff = 1e-6;
}

double phi_plus(double theta, double T) {
  const double x = theta * T;
  if (x < kTaylorCutoff) return T * (1.0 + x / 2.0 + x * x / 6.0);
  return std::expm1(x) / theta;
}

double phi_minus(double theta, double T) {
  const double x = theta * T;
  if (x < kTaylorCutoff) return T * (1.0 - x / 2.0 + x * x / 6.0);
  return -std::expm1(-x) / theta;
}

NonnegMatrix2 m_theta(const ThetaCoefficients& c, double theta) {
  if (!(theta >= 0.0))
    throw Error(ErrorKind::InvalidArgument, "theta must be >= 0");
  return {c.a11, c.a12 * phi_plus(theta, c.T), c.a21,
          c.a22 * phi_minus(theta, c.T)};
}

double eval_h(const ThetaCoefficients& c, double theta) {
  if (!(theta >= 0.0))
    throw Error(ErrorKind::InvalidArgument, "theta must be >= 0");
  const double pm = phi_minus(theta, c.T);
  const double pp = phi_plus(theta, c.T);
  // a11 + a22 pm - 1 - a11 a22 pm + a12 a21 pp, factored so that the O(1)
  // terms do not cancel.
  return c.a12 * c.a21 * pp - (1.0 - c.a11) * (1.0 - c.a22 * pm);
}

std::string_view to_string(ThetaStatus s) {
  switch (s) {
    case ThetaStatus::ConvergentAtZero: return "ConvergentAtZero";
    case ThetaStatus::Window: return "Window";
    case ThetaStatus::Infeasible: return "Infeasible";
  }
  return "Unknown";
}

namespace {

constexpr double kRootTol = 1e-10;
constexpr double kInvPhi = 0.6180339887498949;

// Minimizes f on [lo, hi] assuming unimodality; returns (x, f(x)).
std::pair<double, double> golden_section(const std::function<double(double)>& f,
                                         double lo, double hi) {
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

// Bisects a sign change of h between `nonneg` (h >= 0) and `neg` (h < 0).
// Returns the endpoint on the nonnegative side so the open window excludes it.
double bisect_root(const ThetaCoefficients& c, double nonneg, double neg) {
  while (std::abs(neg - nonneg) > kRootTol) {
    const double mid = 0.5 * (nonneg + neg);
    if (mid == nonneg || mid == neg) break;
    if (eval_h(c, mid) >= 0.0)
      nonneg = mid;
    else
      neg = mid;
  }
  return nonneg;
}

// Minimizes rho(M(theta)) over samples of [lo, hi]; `include_lo` admits lo.
double best_rho_theta(const ThetaCoefficients& c, double lo, double hi,
                      bool include_lo) {
  constexpr int kSamples = 256;
  const auto rho = [&](double th) { return spectral_radius(m_theta(c, th)); };
  const double step = (hi - lo) / kSamples;
  int best = include_lo ? 0 : 1;
  double best_val = rho(lo + best * step);
  for (int j = best + 1; j < kSamples; ++j) {
    const double v = rho(lo + j * step);
    if (v < best_val) {
      best_val = v;
      best = j;
    }
  }
  const double left = lo + std::max(best - 1, include_lo ? 0 : 1) * step;
  const double right = lo + std::min(best + 1, kSamples - 1) * step;
  if (right > left) {
    const auto [x, v] = golden_section(rho, left, right);
    if (v < best_val && eval_h(c, x) < 0.0) return x;
  }
  return lo + best * step;
}

}  // namespace

ThetaSearchResult find_theta(const ThetaCoefficients& c, double theta_max,
                             int grid_size) {
  for (double v : {c.a11, c.a12, c.a21, c.a22})
    if (!std::isfinite(v) || v < 0.0)
      throw Error(ErrorKind::InvalidCoefficients,
                  "theta coefficients must be finite and nonnegative");
  if (!(c.T > 0.0) || !std::isfinite(c.T))
    throw Error(ErrorKind::InvalidCoefficients, "T must be positive");
  if (!(c.a11 < 1.0))
    throw Error(ErrorKind::InvalidCoefficients, "a11 must be < 1");
  if (!(c.a22 * c.T < 1.0))
    throw Error(ErrorKind::InvalidCoefficients, "a22 must be < 1/T");
  if (!(theta_max > 0.0) || grid_size < 3)
    throw Error(ErrorKind::InvalidArgument,
                "theta_max must be positive and grid_size >= 3");

  const auto h = [&](double th) { return eval_h(c, th); };

  std::vector<double> thetas(grid_size);
  std::vector<double> hs(grid_size);
  int imin = 0;
  for (int i = 0; i < grid_size; ++i) {
    thetas[i] = theta_max * i / (grid_size - 1);
    hs[i] = h(thetas[i]);
    if (hs[i] < hs[imin]) imin = i;
  }

  ThetaSearchResult out;
  out.theta_argmin = thetas[imin];
  out.h_min = hs[imin];
  {
    const double lo = thetas[std::max(imin - 1, 0)];
    const double hi = thetas[std::min(imin + 1, grid_size - 1)];
    const auto [x, v] = golden_section(h, lo, hi);
    if (v < out.h_min) {
      out.theta_argmin = x;
      out.h_min = v;
    }
  }

  const double h0 = hs[0];
  if (h0 < 0.0) {
    out.status = ThetaStatus::ConvergentAtZero;
    double upper = theta_max;
    for (int i = 1; i < grid_size; ++i) {
      if (hs[i] >= 0.0) {
        upper = bisect_root(c, thetas[i], thetas[i - 1]);
        break;
      }
    }
    out.window = std::pair{0.0, upper};
    out.theta_best = best_rho_theta(c, 0.0, upper, /*include_lo=*/true);
    return out;
  }

  if (out.h_min >= 0.0) {
    out.status = ThetaStatus::Infeasible;
    return out;
  }

  const double lower = bisect_root(c, 0.0, out.theta_argmin);
  double upper = theta_max;
  if (h(theta_max) >= 0.0) upper = bisect_root(c, theta_max, out.theta_argmin);
  out.status = ThetaStatus::Window;
  out.window = std::pair{lower, upper};
  out.theta_best = best_rho_theta(c, lower, upper, /*include_lo=*/false);
  return out;
}

}  // namespace mutctl
