// Copyright 2026 The mutctl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Reaction-diffusion pair u_t = nu u_xx + f(u, v), v_t = nu v_xx + g(u, v) on
// (0, L) with homogeneous Dirichlet data, in the orthonormal sine basis
// phi_k(x) = sqrt(2/L) sin(k pi x / L), k = 1..n_modes.

#include <iosfwd>
#include <vector>

#include "mutctl/nonlinearity.hpp"
#include "mutctl/solver.hpp"

namespace mutctl {

/// Collocation transform between sine coefficients and values at the interior
/// points x_j = j L / (n_quad + 1), j = 1..n_quad. analyze(synthesize(c)) == c
/// exactly in exact arithmetic (discrete sine orthogonality).
class SpectralBasis {
 public:
  /// Throws Error(InvalidArgument) unless L > 0, n_modes >= 1 and
  /// n_quad >= 2 n_modes.
  SpectralBasis(double L, int n_modes, int n_quad);

  double length() const { return L_; }
  int n_modes() const { return n_modes_; }
  int n_quad() const { return n_quad_; }
  const std::vector<double>& nodes() const { return nodes_; }

  /// values[j] = sum_k c_k phi_k(x_j)
  void synthesize(std::span<const double> coeffs, std::span<double> values) const;
  /// c_k = h sum_j values[j] phi_k(x_j), h = L / (n_quad + 1)
  void analyze(std::span<const double> values, std::span<double> coeffs) const;

 private:
  double L_;
  int n_modes_;
  int n_quad_;
  std::vector<double> nodes_;
  std::vector<double> synth_;    // n_quad x n_modes
  std::vector<double> analyze_;  // n_modes x n_quad
};

struct DiffusionConfig {
  double L = 1.0;
  double nu = 1.0;
  int n_modes = 32;
  /// 0 selects 2 n_modes + 1.
  int n_quad = 0;
  ScalarNonlinearity nonlinearity = make_nonlinearity("zero", {});
  ProblemParams problem;
  /// Sine coefficients of y(0); shorter vectors are zero-padded.
  std::vector<double> beta;

  int effective_n_quad() const { return n_quad > 0 ? n_quad : 2 * n_modes + 1; }
  void validate() const;
};

enum class Component { F, G };

/// Projection of x -> f(u(x), v(x)) (or g) onto the first n_modes sine modes.
StateVector superpose(const DiffusionConfig& cfg, Component which,
                      const StateVector& u, const StateVector& v);

/// The superposition pair on coefficient vectors. Each evaluation allocates
/// its own scratch, so copies may be used concurrently.
NonlinearPair superposition_pair(const DiffusionConfig& cfg);

/// Scalar constants lifted to L^2(0, L): slopes unchanged, growth offsets
/// times sqrt(L). C_A = 1 for the Dirichlet heat semigroup.
LipschitzData derive_constants(const DiffusionConfig& cfg);

SemigroupSpec heat_semigroup(const DiffusionConfig& cfg);
StateVector beta_coefficients(const DiffusionConfig& cfg);

struct DemoResult {
  Trajectory x;
  Trajectory y;
  SolveReport report;
  std::vector<double> u_l2;
  std::vector<double> v_l2;
  std::vector<double> defect_running;
};

/// Solves the semi-observability problem with the scheme matching the
/// condition class: c1 Perov, c2 growth-regime Picard, c3 alternating.
DemoResult run_demo(const DiffusionConfig& cfg, const TimeGrid& grid,
                    const SolverConfig& scfg);

/// Columns t, u_L2, v_L2, defect_running.
void write_norms_csv(std::ostream& os, const DemoResult& demo);

}  // namespace mutctl
