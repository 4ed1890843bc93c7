// Copyright 2026 The mutctl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Calculus of 2x2 nonnegative matrices that certify vector contractions:
// spectral radius, the trace/determinant convergence test, (I - M)^{-1}, and
// the exponent-dependent matrix M(theta) with its feasibility search.

#include <array>
#include <optional>
#include <string_view>
#include <utility>

namespace mutctl {

class NonnegMatrix2 {
 public:
  NonnegMatrix2() = default;
  /// Throws Error(InvalidArgument) if an entry is negative or not finite.
  NonnegMatrix2(double a11, double a12, double a21, double a22);

  static NonnegMatrix2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

  double a11() const { return a11_; }
  double a12() const { return a12_; }
  double a21() const { return a21_; }
  double a22() const { return a22_; }
  /// 0-based (row, col) access.
  double operator()(int row, int col) const;

  double trace() const { return a11_ + a22_; }
  double det() const { return a11_ * a22_ - a12_ * a21_; }

  std::array<double, 2> apply(const std::array<double, 2>& v) const;
  NonnegMatrix2 operator*(const NonnegMatrix2& rhs) const;
  NonnegMatrix2 operator+(const NonnegMatrix2& rhs) const;
  NonnegMatrix2 scaled(double s) const;

  friend bool operator==(const NonnegMatrix2&, const NonnegMatrix2&) = default;

 private:
  double a11_ = 0.0;
  double a12_ = 0.0;
  double a21_ = 0.0;
  double a22_ = 0.0;
};

/// Largest eigenvalue modulus, from the trace/determinant closed form.
double spectral_radius(const NonnegMatrix2& m);

/// Exact trace/determinant test: a11 < 1, a22 < 1 and tr < 1 + det.
/// Strict inequalities, no slack.
bool is_convergent_to_zero(const NonnegMatrix2& m);

/// (I - M)^{-1} by cofactors. Throws Error(SingularOrNotConvergent) unless
/// `m` is convergent to zero.
NonnegMatrix2 inverse_I_minus(const NonnegMatrix2& m);

/// M^p by repeated squaring.
NonnegMatrix2 power(const NonnegMatrix2& m, unsigned p);

// ---------------------------------------------------------------------------
// M(theta) = [[a11, a12 * phi_plus(theta)], [a21, a22 * phi_minus(theta)]]

struct ThetaCoefficients {
  double a11 = 0.0;
  double a12 = 0.0;
  double a21 = 0.0;
  double a22 = 0.0;
  double T = 1.0;
};

/// (e^{theta T} - 1) / theta, equal to T at theta = 0.
double phi_plus(double theta, double T);
/// (1 - e^{-theta T}) / theta, equal to T at theta = 0.
double phi_minus(double theta, double T);

NonnegMatrix2 m_theta(const ThetaCoefficients& c, double theta);

/// tr M(theta) - 1 - det M(theta); negative exactly when M(theta) is
/// convergent to zero.
double eval_h(const ThetaCoefficients& c, double theta);

enum class ThetaStatus { ConvergentAtZero, Window, Infeasible };
std::string_view to_string(ThetaStatus s);

struct ThetaSearchResult {
  ThetaStatus status = ThetaStatus::Infeasible;
  /// Open interval of exponents with h < 0. For ConvergentAtZero this is
  /// [0, upper zero of h) when that zero lies below theta_max.
  std::optional<std::pair<double, double>> window;
  /// Exponent minimizing rho(M(theta)) over the window (0 when
  /// ConvergentAtZero and h increases).
  std::optional<double> theta_best;
  double h_min = 0.0;
  double theta_argmin = 0.0;
};

inline double default_theta_max(double T) { return 50.0 / T; }

/// Locates exponents for which M(theta) is convergent to zero. Coarse scan of
/// `grid_size` points on [0, theta_max], golden-section refinement of the
/// minimum of h, bisection of both sign changes to 1e-10.
/// Throws Error(InvalidCoefficients) unless a11 < 1 and a22 < 1/T.
ThetaSearchResult find_theta(const ThetaCoefficients& c, double theta_max,
                             int grid_size = 1024);
inline ThetaSearchResult find_theta(const ThetaCoefficients& c) {
  return find_theta(c, default_theta_max(c.T));
}

}  // namespace mutctl
