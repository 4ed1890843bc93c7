// Copyright 2026 The mutctl Authors
// SPDX-License-Identifier: Apache-2.0

#include "mutctl/semigroup.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mutctl/error.hpp"
#include "mutctl/kernels.hpp"

namespace mutctl {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMatrix> as_matrix(std::size_t n, std::span<const double> d) {
  return {d.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)};
}

// Relative slack on the [0, 2T] window so that t_i + T computed in floating
// point is not rejected at the right end.
constexpr double kWindowSlack = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

// --- Propagator -------------------------------------------------------------

Propagator Propagator::diagonal(std::vector<double> factors) {
  Propagator p;
  p.diagonal_ = true;
  p.n_ = factors.size();
  p.data_ = std::move(factors);
  return p;
}

Propagator Propagator::dense(std::size_t n, std::vector<double> rowmajor) {
  if (rowmajor.size() != n * n)
    throw Error(ErrorKind::DimensionMismatch, "dense propagator needs n*n entries");
  Propagator p;
  p.diagonal_ = false;
  p.n_ = n;
  p.data_ = std::move(rowmajor);
  return p;
}

void Propagator::apply(std::span<const double> v, std::span<double> out) const {
  require_same_dim(n_, v.size(), "Propagator::apply");
  require_same_dim(n_, out.size(), "Propagator::apply");
  if (diagonal_)
    kernels::mul(data_, v, out);
  else
    kernels::gemv(data_, n_, n_, v, out);
}

void Propagator::apply_add(double alpha, std::span<const double> v,
                           std::span<double> out) const {
  require_same_dim(n_, v.size(), "Propagator::apply_add");
  require_same_dim(n_, out.size(), "Propagator::apply_add");
  if (diagonal_) {
    kernels::mul_axpy(alpha, data_, v, out);
    return;
  }
  const auto& k = kernels::active();
  for (std::size_t r = 0; r < n_; ++r)
    out[r] += alpha * k.dot(data_.data() + r * n_, v.data(), n_);
}

StateVector Propagator::operator()(const StateVector& v) const {
  StateVector out(v.dim());
  apply(v.coords(), out.coords());
  return out;
}

double Propagator::norm() const {
  if (diagonal_) {
    double m = 0.0;
    for (double f : data_) m = std::max(m, std::abs(f));
    return m;
  }
  return matrix_2norm(n_, data_);
}

// --- dense helpers ----------------------------------------------------------

std::vector<double> matrix_exponential(std::size_t n,
                                       std::span<const double> a_rowmajor,
                                       double t) {
  if (a_rowmajor.size() != n * n)
    throw Error(ErrorKind::DimensionMismatch, "matrix_exponential needs n*n entries");
  const Eigen::Index m = static_cast<Eigen::Index>(n);
  RowMatrix a = t * as_matrix(n, a_rowmajor);

  // Scale so that |A / 2^s|_inf <= 1/2, where the (6,6) Pade approximant is
  // accurate to double precision.
  const double norm_inf = a.cwiseAbs().rowwise().sum().maxCoeff();
  int s = 0;
  if (norm_inf > 0.5) s = static_cast<int>(std::ceil(std::log2(norm_inf / 0.5)));
  a /= std::ldexp(1.0, s);

  constexpr int kDegree = 6;
  double c = 1.0;
  const RowMatrix id = RowMatrix::Identity(m, m);
  RowMatrix num = id;
  RowMatrix den = id;
  RowMatrix pw = id;
  for (int k = 1; k <= kDegree; ++k) {
    c *= static_cast<double>(kDegree - k + 1) / (k * (2.0 * kDegree - k + 1));
    pw = pw * a;
    num += c * pw;
    den += ((k % 2 == 0) ? c : -c) * pw;
  }
  RowMatrix r = den.partialPivLu().solve(num);
  for (int i = 0; i < s; ++i) r = r * r;

  return {r.data(), r.data() + r.size()};
}

double matrix_2norm(std::size_t n, std::span<const double> rowmajor) {
  if (n == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(as_matrix(n, rowmajor));
  return svd.singularValues()(0);
}

// --- SemigroupSpec ----------------------------------------------------------

SemigroupSpec SemigroupSpec::scalar(double lambda, double T) {
  if (!std::isfinite(lambda))
    throw Error(ErrorKind::InvalidArgument, "lambda must be finite");
  if (!(T > 0.0) || !std::isfinite(T))
    throw Error(ErrorKind::InvalidArgument, "T must be positive");
  return SemigroupSpec(ScalarExp{lambda}, T);
}

SemigroupSpec SemigroupSpec::matrix(std::size_t n, std::vector<double> a, double T) {
  if (n == 0 || a.size() != n * n)
    throw Error(ErrorKind::DimensionMismatch,
                "matrix generator must be n x n with n >= 1");
  for (double v : a)
    if (!std::isfinite(v))
      throw Error(ErrorKind::InvalidArgument, "generator entries must be finite");
  if (!(T > 0.0) || !std::isfinite(T))
    throw Error(ErrorKind::InvalidArgument, "T must be positive");
  return SemigroupSpec(MatrixExp{n, std::move(a)}, T);
}

SemigroupSpec SemigroupSpec::heat1d(double L, int n_modes, double nu, double T) {
  if (!(L > 0.0) || !(nu > 0.0) || n_modes < 1)
    throw Error(ErrorKind::InvalidArgument,
                "Heat1D needs L > 0, nu > 0 and n_modes >= 1");
  if (!(T > 0.0) || !std::isfinite(T))
    throw Error(ErrorKind::InvalidArgument, "T must be positive");
  return SemigroupSpec(Heat1D{L, n_modes, nu}, T);
}

std::size_t SemigroupSpec::dim() const {
  return std::visit(Overloaded{[](const ScalarExp&) -> std::size_t { return 1; },
                               [](const MatrixExp& m) { return m.n; },
                               [](const Heat1D& h) {
                                 return static_cast<std::size_t>(h.n_modes);
                               }},
                    variant_);
}

bool SemigroupSpec::is_diagonal() const {
  return !std::holds_alternative<MatrixExp>(variant_);
}

std::vector<double> SemigroupSpec::eigenvalues() const {
  if (const auto* s = std::get_if<ScalarExp>(&variant_)) return {s->lambda};
  if (const auto* h = std::get_if<Heat1D>(&variant_)) {
    std::vector<double> ev(h->n_modes);
    for (int k = 1; k <= h->n_modes; ++k) {
      const double w = k * std::numbers::pi / h->L;
      ev[k - 1] = -h->nu * w * w;
    }
    return ev;
  }
  throw Error(ErrorKind::InvalidArgument,
              "eigenvalues() is only defined for diagonal semigroups");
}

Propagator SemigroupSpec::at(double t) const {
  if (!(t >= 0.0) || t > 2.0 * T_ * (1.0 + kWindowSlack))
    throw Error(ErrorKind::TimeOutOfRange,
                "semigroup evaluated at t = " + std::to_string(t) +
                    " outside [0, 2T] with T = " + std::to_string(T_));
  if (const auto* m = std::get_if<MatrixExp>(&variant_)) {
    if (t == 0.0) {
      std::vector<double> id(m->n * m->n, 0.0);
      for (std::size_t i = 0; i < m->n; ++i) id[i * m->n + i] = 1.0;
      return Propagator::dense(m->n, std::move(id));
    }
    return Propagator::dense(m->n, matrix_exponential(m->n, m->a, t));
  }
  std::vector<double> f = eigenvalues();
  for (double& x : f) x = std::exp(x * t);
  return Propagator::diagonal(std::move(f));
}

// --- free operations ----------------------------------------------------------

StateVector apply(const SemigroupSpec& s, double t, const StateVector& v) {
  require_same_dim(s.dim(), v.dim(), "apply");
  return s.at(t)(v);
}

double norm_X(const SemigroupSpec& s, const StateVector& v) {
  require_same_dim(s.dim(), v.dim(), "norm_X");
  return v.norm();
}

double bound_CA(const SemigroupSpec& s) {
  const double T = s.horizon();
  return std::visit(
      Overloaded{[&](const ScalarExp& e) { return std::max(1.0, std::exp(2.0 * e.lambda * T)); },
                 [](const Heat1D&) { return 1.0; },
                 [&](const MatrixExp& m) {
                   constexpr int kSamples = 256;
                   double best = 0.0;
                   for (int j = 0; j < kSamples; ++j) {
                     const double t = 2.0 * T * j / (kSamples - 1);
                     best = std::max(best, matrix_2norm(m.n, matrix_exponential(m.n, m.a, t)));
                   }
                   return 1.01 * best;
                 }},
      s.variant());
}

double norm_S_at(const SemigroupSpec& s, double t) {
  if (!(t >= 0.0) || t > 2.0 * s.horizon() * (1.0 + kWindowSlack))
    throw Error(ErrorKind::TimeOutOfRange, "norm_S_at outside [0, 2T]");
  return std::visit(
      Overloaded{[&](const ScalarExp& e) { return std::exp(e.lambda * t); },
                 [&](const Heat1D&) { return std::exp(s.eigenvalues().front() * t); },
                 [&](const MatrixExp&) { return s.at(t).norm(); }},
      s.variant());
}

StateVector solve_shifted(const SemigroupSpec& s, double shift,
                          const StateVector& rhs) {
  require_same_dim(s.dim(), rhs.dim(), "solve_shifted");
  const Propagator st = s.at(s.horizon());
  const std::size_t n = s.dim();
  StateVector out(n);
  if (st.is_diagonal()) {
    for (std::size_t i = 0; i < n; ++i) {
      const double d = shift - st.data()[i];
      if (std::abs(d) <= 1e-13 * std::max(1.0, std::abs(shift)))
        throw Error(ErrorKind::SingularOrNotConvergent,
                    "shift I - S(T) is singular");
      out[i] = rhs[i] / d;
    }
    return out;
  }
  RowMatrix m = shift * RowMatrix::Identity(n, n) - as_matrix(n, st.data());
  Eigen::FullPivLU<RowMatrix> lu(m);
  lu.setThreshold(1e-13);
  if (!lu.isInvertible())
    throw Error(ErrorKind::SingularOrNotConvergent, "shift I - S(T) is singular");
  Eigen::Map<const Eigen::VectorXd> b(rhs.coords().data(), n);
  Eigen::VectorXd z = lu.solve(b);
  for (std::size_t i = 0; i < n; ++i) out[i] = z(i);
  return out;
}

}  // namespace mutctl
