// Copyright 2026 The mutctl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// C0-semigroups S(t) on finite-dimensional representations of X: a scalar
// exponential, a dense matrix exponential, and the Dirichlet heat semigroup on
// (0, L) truncated to its first sine modes.

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "mutctl/state_vector.hpp"

namespace mutctl {

struct ScalarExp {
  double lambda = 0.0;
};

struct MatrixExp {
  std::size_t n = 0;
  std::vector<double> a;  // row-major n x n generator
};

struct Heat1D {
  double L = 1.0;
  int n_modes = 1;
  double nu = 1.0;
};

/// S(t) frozen at a single time. Diagonal variants store the multipliers,
/// the dense variant a row-major matrix.
class Propagator {
 public:
  static Propagator diagonal(std::vector<double> factors);
  static Propagator dense(std::size_t n, std::vector<double> rowmajor);

  std::size_t dim() const { return n_; }
  bool is_diagonal() const { return diagonal_; }
  std::span<const double> data() const { return data_; }

  /// out = S v. `out` must not alias `v`.
  void apply(std::span<const double> v, std::span<double> out) const;
  /// out += alpha S v.
  void apply_add(double alpha, std::span<const double> v,
                 std::span<double> out) const;
  StateVector operator()(const StateVector& v) const;

  /// Operator 2-norm.
  double norm() const;

 private:
  bool diagonal_ = true;
  std::size_t n_ = 0;
  std::vector<double> data_;
};

class SemigroupSpec {
 public:
  using Variant = std::variant<ScalarExp, MatrixExp, Heat1D>;

  static SemigroupSpec scalar(double lambda, double T);
  static SemigroupSpec matrix(std::size_t n, std::vector<double> a_rowmajor,
                              double T);
  static SemigroupSpec heat1d(double L, int n_modes, double nu, double T);

  const Variant& variant() const { return variant_; }
  double horizon() const { return T_; }
  std::size_t dim() const;
  bool is_diagonal() const;
  /// Finite rank or compact semigroup; never checked at run time.
  bool compact() const { return true; }

  /// Diagonal variants: the generator eigenvalues (Heat1D: -nu (k pi / L)^2).
  std::vector<double> eigenvalues() const;

  /// S(t) for 0 <= t <= 2T; throws Error(TimeOutOfRange) otherwise.
  Propagator at(double t) const;

 private:
  SemigroupSpec(Variant v, double T) : variant_(std::move(v)), T_(T) {}

  Variant variant_;
  double T_ = 1.0;
};

StateVector apply(const SemigroupSpec& s, double t, const StateVector& v);

/// |v|_X: Euclidean norm of the coordinates (the L^2 norm for Heat1D by
/// Parseval).
double norm_X(const SemigroupSpec& s, const StateVector& v);

/// Upper bound C_A of |S(t)| over [0, 2T]. MatrixExp samples 256 times and
/// applies a 1.01 safety factor.
double bound_CA(const SemigroupSpec& s);

/// |S(t)| in the active representation.
double norm_S_at(const SemigroupSpec& s, double t);

/// Solves (shift I - S(T)) z = rhs. Throws Error(SingularOrNotConvergent) if
/// the shifted operator is numerically singular.
StateVector solve_shifted(const SemigroupSpec& s, double shift,
                          const StateVector& rhs);

/// exp(t A) for a row-major n x n matrix by Pade(6,6) scaling and squaring.
std::vector<double> matrix_exponential(std::size_t n,
                                       std::span<const double> a_rowmajor,
                                       double t);

/// Operator 2-norm of a row-major n x n matrix.
double matrix_2norm(std::size_t n, std::span<const double> rowmajor);

}  // namespace mutctl
