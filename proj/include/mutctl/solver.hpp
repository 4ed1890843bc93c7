// Copyright 2026 The mutctl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Fixed-point solvers for the mutual control problem
//
//   x' = A x + F(x, y),  y' = A y + G(x, y)  on [0, T],
//   x(T) - a x(0) = k (y(T) - b y(0)),
//
// in mild form. Two problems are covered: semi-observability (y(0) = beta is
// prescribed, x(0) is recovered) and observability (both initial states are
// recovered). Each solver reports the certification matrix it relied on, the
// per-iteration residual pairs and the controllability defect of its output.

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mutctl/error.hpp"
#include "mutctl/matrix2.hpp"
#include "mutctl/semigroup.hpp"
#include "mutctl/state_vector.hpp"
#include "mutctl/trajectory.hpp"

namespace mutctl {

struct ProblemParams {
  double a = 1.0;
  double b = 1.0;
  double k = 1.0;
  double T = 1.0;

  /// Throws Error(RangeError) unless a, b, k, T are all positive.
  void validate() const;
};

/// Pointwise evaluator of (F(x, y), G(x, y)) on X^2.
struct NonlinearPair {
  using Eval = std::function<void(std::span<const double> x,
                                  std::span<const double> y,
                                  std::span<double> f, std::span<double> g)>;
  using Component = std::function<void(std::span<const double> x,
                                       std::span<const double> y,
                                       std::span<double> out)>;

  Eval eval;
  /// Declares that F - kG is bounded on X^2 (needed by the observability
  /// existence argument; a warning is emitted when false).
  bool difference_bounded = false;

  static NonlinearPair zero();
  static NonlinearPair from_components(Component f, Component g,
                                       bool difference_bounded);
};

enum class GrowthMode { Lipschitz, Growth, Mixed };
std::string_view to_string(GrowthMode m);

/// Lipschitz constants of F (a11, a12) and G (a21, a22), or linear-growth
/// constants, plus the growth offsets used by the localization estimates.
/// In Mixed mode F obeys a growth bound and G a Lipschitz bound.
struct LipschitzData {
  double a11 = 0.0;
  double a12 = 0.0;
  double a21 = 0.0;
  double a22 = 0.0;
  double g13 = 0.0;
  double g23 = 0.0;
  GrowthMode mode = GrowthMode::Lipschitz;

  void validate() const;
};

struct SolverConfig {
  double theta = 0.0;
  double tol = 1e-10;
  int max_iter = 10'000;
  double relaxation = 0.5;
  bool certify = true;
  /// Initial x(0) guess; defaults to the solution of the F = G = 0 problem.
  std::optional<StateVector> x_guess;
  /// Multiplies the a13 growth term of C1 by T (see schauder_constants).
  bool c1_with_T = false;
  /// Substeps per grid step of the integrator behind forward_defect; 0 skips
  /// the forward check.
  int forward_refine = 4;

  void validate() const;
};

struct SolveReport {
  std::string method;
  int iterations = 0;
  /// Inner iterations summed over all outer steps (two-level schemes only).
  int inner_iterations = 0;
  /// Per-iteration (|dx|, |dy|) in the norms the scheme contracts in.
  std::vector<std::array<double, 2>> residual_history;
  double defect = 0.0;
  double defect_tolerance = 0.0;
  /// Defect of the pair obtained by integrating the evolution system forward
  /// from the returned initial states.
  std::optional<double> forward_defect;
  std::optional<double> rho;
  std::optional<NonnegMatrix2> certificate;
  double theta = 0.0;
  std::optional<std::array<double, 2>> radii;
  std::optional<bool> localized;
  bool converged = false;
  std::vector<std::string> warnings;
};

/// Solver failure that keeps the partial report (residual history included).
class SolveError : public Error {
 public:
  SolveError(ErrorKind kind, const std::string& message, SolveReport report)
      : Error(kind, message), report_(std::move(report)) {}
  const SolveReport& report() const { return report_; }

 private:
  SolveReport report_;
};

struct SolveResult {
  Trajectory x;
  Trajectory y;
  SolveReport report;
};

struct ObservabilityResult {
  StateVector alpha;
  StateVector beta;
  Trajectory x;
  Trajectory y;
  SolveReport report;
};

// --- semi-observability -------------------------------------------------------

/// (N1(x, y), N2(x, y)) with
///   N1(t) = (1/a) S(t+T)(x(0) - k beta) + (kb/a) S(t) beta
///           + int_0^t S(t-s) F ds + (1/a) int_0^T S(t+T-s)(F - kG) ds,
///   N2(t) = S(t) beta + int_0^t S(t-s) G ds.
std::pair<Trajectory, Trajectory> apply_N_semi(const ProblemParams& p,
                                               const SemigroupSpec& s,
                                               const NonlinearPair& fg,
                                               const StateVector& beta,
                                               const Trajectory& x,
                                               const Trajectory& y);

/// Coefficients c such that build_M_semi(..., theta) == m_theta(c, theta).
ThetaCoefficients semi_theta_coefficients(const ProblemParams& p,
                                          const LipschitzData& lip, double c_a);

/// Contraction matrix of the semi-observability operator in the
/// (Chebyshev, Bielecki-theta) pair of norms.
NonnegMatrix2 build_M_semi(const ProblemParams& p, const LipschitzData& lip,
                           double c_a, double theta);

/// Picard iteration of apply_N_semi. Throws SolveError(MatrixNotConvergent)
/// when cfg.certify and the matrix fails the test, SolveError(MaxIterExceeded)
/// when the residuals do not fall below cfg.tol.
SolveResult perov_solve_semi(const ProblemParams& p, const SemigroupSpec& s,
                             const NonlinearPair& fg, const LipschitzData& lip,
                             const StateVector& beta, const TimeGrid& grid,
                             const SolverConfig& cfg);

/// Minimal radii (I - M)^{-1} (C1, C2) of an invariant set.
std::array<double, 2> schauder_radii(const NonnegMatrix2& m, double c1, double c2);

/// Constants of the invariance estimate:
///   C1 = (1/a) C_A (1+b) k |beta| + C_A (k/a) T g23 + C_A (1 + 1/a) g13,
///   C2 = C_A |beta| + C_A T g23.
/// With c1_with_T the g13 term is multiplied by T, which is what integrating
/// the growth bound over [0, T] gives; the default keeps the printed form.
std::array<double, 2> schauder_constants(const ProblemParams& p,
                                         const LipschitzData& lip, double c_a,
                                         double beta_norm, bool c1_with_T = false);

/// |x(t_i)| <= R1 and |y(t_i)| <= e^{theta t_i} R2 at every node, with 1e-9
/// relative slack.
bool verify_localization(const Trajectory& x, const Trajectory& y, double r1,
                         double r2, double theta);

/// Picard iteration in the growth regime started inside the invariant set
/// (x = 0, y = S(.) beta), reporting the radii and the localization check.
SolveResult schauder_solve_semi(const ProblemParams& p, const SemigroupSpec& s,
                                const NonlinearPair& fg, const LipschitzData& lip,
                                const StateVector& beta, const TimeGrid& grid,
                                const SolverConfig& cfg);

/// Alternating scheme: for fixed x_m, iterate y <- N2(x_m, y) to tolerance
/// (a contraction with factor a22 C_A phi_minus(theta)), then
/// x_{m+1} = N1(x_m, y). Throws SolveError(InnerNotContractive) when that
/// factor is >= 1, SolveError(MaxIterExceeded) when either loop stalls.
SolveResult avramescu_solve_semi(const ProblemParams& p, const SemigroupSpec& s,
                                 const NonlinearPair& fg, const LipschitzData& lip,
                                 const StateVector& beta, const TimeGrid& grid,
                                 const SolverConfig& cfg);

// --- observability ------------------------------------------------------------

/// The operator with frozen initial data (alpha, beta):
///   N1(t) = (1/a) S(t)[S(T) alpha - k S(T) beta + kb beta + J] + int_0^t S(t-s) F ds,
///   N2(t) = (1/(kb)) S(t)[-S(T) alpha + k S(T) beta + a alpha - J] + int_0^t S(t-s) G ds,
/// where J = int_0^T S(T-s)(F - kG) ds.
std::pair<Trajectory, Trajectory> apply_N_obs(const ProblemParams& p,
                                              const SemigroupSpec& s,
                                              const NonlinearPair& fg,
                                              const StateVector& alpha,
                                              const StateVector& beta,
                                              const Trajectory& x,
                                              const Trajectory& y);

/// T C_A [[C_A(aF + k aG)/a + aF, C_A(bF + k bG)/a + bF],
///        [C_A(aF + k aG)/(kb) + aG, C_A(bF + k bG)/(kb) + bG]]
/// with (aF, bF, aG, bG) = (a11, a12, a21, a22).
NonnegMatrix2 build_M_obs(const ProblemParams& p, const LipschitzData& lip,
                          double c_a);

/// Damped Picard on H(alpha, beta) = (x_{alpha,beta}(0), y_{alpha,beta}(0)),
/// each H evaluation being an inner Perov solve to tol/10. Throws
/// SolveError(OuterNotConverged) if the outer iteration stalls or diverges.
ObservabilityResult observability_solve(const ProblemParams& p,
                                        const SemigroupSpec& s,
                                        const NonlinearPair& fg,
                                        const LipschitzData& lip,
                                        const TimeGrid& grid,
                                        const SolverConfig& cfg,
                                        const StateVector& alpha0,
                                        const StateVector& beta0);

// --- checks ---------------------------------------------------------------------

/// |x(T) - a x(0) - k (y(T) - b y(0))|_X
double control_defect(const ProblemParams& p, const Trajectory& x,
                      const Trajectory& y);

/// control_defect evaluated with t_i in place of T, for every node.
std::vector<double> running_defect(const ProblemParams& p, const Trajectory& x,
                                   const Trajectory& y);

/// Integrates the evolution system from (x0, y0) with an integrating-factor
/// RK4 scheme on `n_steps` uniform steps and returns the defect of the
/// proportionality condition at T.
double forward_defect(const ProblemParams& p, const SemigroupSpec& s,
                      const NonlinearPair& fg, const StateVector& x0,
                      const StateVector& y0, int n_steps);

struct MildResidual {
  double x = 0.0;
  double y = 0.0;
};

/// max_i |u(t_i) - S(t_i) u(0) - int_0^{t_i} S(t_i - s) H(x, y) ds| for both
/// components, with the discrete trapezoid convolution.
MildResidual mild_residual(const SemigroupSpec& s, const NonlinearPair& fg,
                           const Trajectory& x, const Trajectory& y);

}  // namespace mutctl
