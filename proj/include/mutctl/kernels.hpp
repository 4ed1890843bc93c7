// Copyright 2026 The mutctl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Dense double-precision inner loops used by the propagators, quadrature and
// spectral transforms. Every backend implements the same table; the scalar
// backend is the reference the SIMD variants are tested against.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace mutctl::kernels {

enum class Backend { Scalar, Avx2, Neon };

struct KernelTable {
  Backend backend;
  // sum_i x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // sum_i x[i]^2
  double (*sum_sq)(const double* x, std::size_t n);
  // sum_i (x[i] - y[i])^2
  double (*dist_sq)(const double* x, const double* y, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // out = d * x  (elementwise)
  void (*mul)(const double* d, const double* x, double* out, std::size_t n);
  // y += alpha * d * x  (elementwise)
  void (*mul_axpy)(double alpha, const double* d, const double* x, double* y,
                   std::size_t n);
  // y = A x, A row-major rows x cols
  void (*gemv)(const double* a, std::size_t rows, std::size_t cols,
               const double* x, double* y);
};

std::string_view name(Backend b);
std::optional<Backend> parse_backend(std::string_view text);

/// Table for `b`, or nullptr if the backend is not compiled in or the CPU
/// lacks the instructions.
const KernelTable* table_for(Backend b);

/// Backends usable on this machine, scalar first.
std::vector<Backend> available_backends();

/// Currently selected table. The first call picks the widest available
/// backend unless MUTCTL_KERNELS names another one.
const KernelTable& active();

/// Forces a backend. Returns false (and keeps the current one) if `b` is not
/// available.
bool select(Backend b);

// Span conveniences over the active table.
double dot(std::span<const double> x, std::span<const double> y);
double sum_sq(std::span<const double> x);
double dist_sq(std::span<const double> x, std::span<const double> y);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void mul(std::span<const double> d, std::span<const double> x,
         std::span<double> out);
void mul_axpy(double alpha, std::span<const double> d,
              std::span<const double> x, std::span<double> y);
void gemv(std::span<const double> a, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<double> y);

namespace detail {
const KernelTable& scalar_table();
const KernelTable* avx2_table();  // nullptr when not compiled in
const KernelTable* neon_table();  // nullptr when not compiled in
}  // namespace detail

}  // namespace mutctl::kernels
