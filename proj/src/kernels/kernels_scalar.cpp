// Copyright 2026 The mutctl Authors
// SPDX-License-Identifier: Apache-2.0

#include "mutctl/kernels.hpp"

namespace mutctl::kernels::detail {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

double sum_sq_scalar(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
  return s;
}

double dist_sq_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void mul_scalar(const double* d, const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = d[i] * x[i];
}

void mul_axpy_scalar(double alpha, const double* d, const double* x, double* y,
                     std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * (d[i] * x[i]);
}

void gemv_scalar(const double* a, std::size_t rows, std::size_t cols,
                 const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot_scalar(a + r * cols, x, cols);
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{Backend::Scalar, dot_scalar,     sum_sq_scalar,
                                 dist_sq_scalar,  axpy_scalar,    mul_scalar,
                                 mul_axpy_scalar, gemv_scalar};
  return table;
}

}  // namespace mutctl::kernels::detail
