// Copyright 2026 The mutctl Authors
// SPDX-License-Identifier: Apache-2.0

#include "mutctl/diffusion.hpp"

#include <cmath>
#include <cstdio>
#include <memory>
#include <numbers>
#include <ostream>

#include "mutctl/kernels.hpp"

namespace mutctl {

SpectralBasis::SpectralBasis(double L, int n_modes, int n_quad)
    : L_(L), n_modes_(n_modes), n_quad_(n_quad) {
  if (!(L > 0.0) || !std::isfinite(L))
    throw Error(ErrorKind::InvalidArgument, "diffusion.L must be > 0");
  if (n_modes < 1)
    throw Error(ErrorKind::InvalidArgument, "diffusion.n_modes must be >= 1");
  if (n_quad < 2 * n_modes)
    throw Error(ErrorKind::InvalidArgument, "diffusion.n_quad must be >= 2 n_modes");
  const std::size_t nq = static_cast<std::size_t>(n_quad);
  const std::size_t nm = static_cast<std::size_t>(n_modes);
  const double h = L / (n_quad + 1);
  const double scale = std::sqrt(2.0 / L);
  nodes_.resize(nq);
  synth_.resize(nq * nm);
  analyze_.resize(nm * nq);
  for (std::size_t j = 0; j < nq; ++j) {
    nodes_[j] = h * static_cast<double>(j + 1);
    for (std::size_t k = 0; k < nm; ++k) {
      // sin(k pi j / (N+1)) with integer arguments reduced exactly.
      const double arg = std::numbers::pi * static_cast<double>((k + 1) * (j + 1)) /
                         static_cast<double>(n_quad + 1);
      const double phi = scale * std::sin(arg);
      synth_[j * nm + k] = phi;
      analyze_[k * nq + j] = h * phi;
    }
  }
}

void SpectralBasis::synthesize(std::span<const double> coeffs,
                               std::span<double> values) const {
  require_same_dim(static_cast<std::size_t>(n_modes_), coeffs.size(), "synthesize");
  require_same_dim(static_cast<std::size_t>(n_quad_), values.size(), "synthesize");
  kernels::gemv(synth_, n_quad_, n_modes_, coeffs, values);
}

void SpectralBasis::analyze(std::span<const double> values,
                            std::span<double> coeffs) const {
  require_same_dim(static_cast<std::size_t>(n_quad_), values.size(), "analyze");
  require_same_dim(static_cast<std::size_t>(n_modes_), coeffs.size(), "analyze");
  kernels::gemv(analyze_, n_modes_, n_quad_, values, coeffs);
}

void DiffusionConfig::validate() const {
  if (!(L > 0.0) || !std::isfinite(L))
    throw Error(ErrorKind::RangeError, "diffusion.L must be > 0");
  if (!(nu > 0.0) || !std::isfinite(nu))
    throw Error(ErrorKind::RangeError, "diffusion.nu must be > 0");
  if (n_modes < 1) throw Error(ErrorKind::RangeError, "diffusion.n_modes must be >= 1");
  if (n_quad != 0 && n_quad < 2 * n_modes)
    throw Error(ErrorKind::RangeError, "diffusion.n_quad must be >= 2 n_modes");
  if (beta.size() > static_cast<std::size_t>(n_modes))
    throw Error(ErrorKind::RangeError, "beta has more coefficients than n_modes");
  problem.validate();
}

namespace {

struct Superposer {
  std::shared_ptr<const SpectralBasis> basis;
  ScalarNonlinearity::Fn f;
  ScalarNonlinearity::Fn g;

  void operator()(std::span<const double> u, std::span<const double> v,
                  std::span<double> fo, std::span<double> go) const {
    const std::size_t nq = static_cast<std::size_t>(basis->n_quad());
    std::vector<double> uq(nq), vq(nq), fq(nq), gq(nq);
    basis->synthesize(u, uq);
    basis->synthesize(v, vq);
    for (std::size_t j = 0; j < nq; ++j) {
      fq[j] = f(uq[j], vq[j]);
      gq[j] = g(uq[j], vq[j]);
    }
    basis->analyze(fq, fo);
    basis->analyze(gq, go);
  }
};

Superposer make_superposer(const DiffusionConfig& cfg) {
  return {std::make_shared<const SpectralBasis>(cfg.L, cfg.n_modes,
                                                cfg.effective_n_quad()),
          cfg.nonlinearity.f, cfg.nonlinearity.g};
}

}  // namespace

StateVector superpose(const DiffusionConfig& cfg, Component which,
                      const StateVector& u, const StateVector& v) {
  const std::size_t n = static_cast<std::size_t>(cfg.n_modes);
  require_same_dim(n, u.dim(), "superpose u");
  require_same_dim(n, v.dim(), "superpose v");
  StateVector f(n), g(n);
  make_superposer(cfg)(u.coords(), v.coords(), f.coords(), g.coords());
  return which == Component::F ? f : g;
}

NonlinearPair superposition_pair(const DiffusionConfig& cfg) {
  NonlinearPair fg;
  fg.eval = make_superposer(cfg);
  fg.difference_bounded = cfg.nonlinearity.difference_bounded;
  return fg;
}

LipschitzData derive_constants(const DiffusionConfig& cfg) {
  const ScalarNonlinearity& nl = cfg.nonlinearity;
  const double root_measure = std::sqrt(cfg.L);
  LipschitzData lip;
  lip.a11 = nl.a11;
  lip.a12 = nl.a12;
  lip.a21 = nl.a21;
  lip.a22 = nl.a22;
  lip.g13 = nl.c_f * root_measure;
  lip.g23 = nl.c_g * root_measure;
  lip.mode = growth_mode(nl.condition);
  return lip;
}

SemigroupSpec heat_semigroup(const DiffusionConfig& cfg) {
  return SemigroupSpec::heat1d(cfg.L, cfg.n_modes, cfg.nu, cfg.problem.T);
}

StateVector beta_coefficients(const DiffusionConfig& cfg) {
  StateVector beta(static_cast<std::size_t>(cfg.n_modes));
  for (std::size_t i = 0; i < cfg.beta.size(); ++i) beta[i] = cfg.beta[i];
  return beta;
}

DemoResult run_demo(const DiffusionConfig& cfg, const TimeGrid& grid,
                    const SolverConfig& scfg) {
  cfg.validate();
  const SemigroupSpec s = heat_semigroup(cfg);
  const NonlinearPair fg = superposition_pair(cfg);
  const LipschitzData lip = derive_constants(cfg);
  const StateVector beta = beta_coefficients(cfg);

  SolveResult r = [&] {
    switch (cfg.nonlinearity.condition) {
      case ConditionClass::C2:
        return schauder_solve_semi(cfg.problem, s, fg, lip, beta, grid, scfg);
      case ConditionClass::C3:
        return avramescu_solve_semi(cfg.problem, s, fg, lip, beta, grid, scfg);
      case ConditionClass::C1:
        break;
    }
    return perov_solve_semi(cfg.problem, s, fg, lip, beta, grid, scfg);
  }();

  DemoResult out{std::move(r.x), std::move(r.y), std::move(r.report), {}, {}, {}};
  for (std::size_t i = 0; i < out.x.size(); ++i) {
    // Parseval: the coefficient norm is the L^2(0, L) norm.
    out.u_l2.push_back(euclidean_norm(out.x.at(i)));
    out.v_l2.push_back(euclidean_norm(out.y.at(i)));
  }
  out.defect_running = running_defect(cfg.problem, out.x, out.y);
  return out;
}

void write_norms_csv(std::ostream& os, const DemoResult& demo) {
  os << "t,u_L2,v_L2,defect_running\n";
  char buf[128];
  for (std::size_t i = 0; i < demo.x.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n",
                  demo.x.grid().node(static_cast<int>(i)), demo.u_l2[i],
                  demo.v_l2[i], demo.defect_running[i]);
    os << buf;
  }
}

}  // namespace mutctl
