// Copyright 2026 The mutctl Authors
// SPDX-License-Identifier: Apache-2.0

#include <atomic>
#include <cassert>
#include <cstdlib>

#include "mutctl/kernels.hpp"

namespace mutctl::kernels {

namespace detail {
#ifndef MUTCTL_HAVE_AVX2
const KernelTable* avx2_table() { return nullptr; }
#endif
#ifndef MUTCTL_HAVE_NEON
const KernelTable* neon_table() { return nullptr; }
#endif
}  // namespace detail

namespace {

bool cpu_has_avx2() {
#if defined(MUTCTL_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* pick_default() {
  if (const char* env = std::getenv("MUTCTL_KERNELS")) {
    if (auto b = parse_backend(env)) {
      if (const KernelTable* t = table_for(*b)) return t;
    }
  }
  if (const KernelTable* t = table_for(Backend::Avx2)) return t;
  if (const KernelTable* t = table_for(Backend::Neon)) return t;
  return &detail::scalar_table();
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{pick_default()};
  return table;
}

}  // namespace

std::string_view name(Backend b) {
  switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    case Backend::Neon: return "neon";
  }
  return "unknown";
}

std::optional<Backend> parse_backend(std::string_view text) {
  if (text == "scalar") return Backend::Scalar;
  if (text == "avx2") return Backend::Avx2;
  if (text == "neon") return Backend::Neon;
  return std::nullopt;
}

const KernelTable* table_for(Backend b) {
  switch (b) {
    case Backend::Scalar: return &detail::scalar_table();
    case Backend::Avx2: {
      static const bool ok = cpu_has_avx2();
      return ok ? detail::avx2_table() : nullptr;
    }
    case Backend::Neon: return detail::neon_table();
  }
  return nullptr;
}

std::vector<Backend> available_backends() {
  std::vector<Backend> out;
  for (Backend b : {Backend::Scalar, Backend::Avx2, Backend::Neon})
    if (table_for(b) != nullptr) out.push_back(b);
  return out;
}

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

bool select(Backend b) {
  const KernelTable* t = table_for(b);
  if (t == nullptr) return false;
  current().store(t, std::memory_order_release);
  return true;
}

double dot(std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size());
  return active().dot(x.data(), y.data(), x.size());
}

double sum_sq(std::span<const double> x) {
  return active().sum_sq(x.data(), x.size());
}

double dist_sq(std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size());
  return active().dist_sq(x.data(), y.data(), x.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  active().axpy(alpha, x.data(), y.data(), x.size());
}

void mul(std::span<const double> d, std::span<const double> x,
         std::span<double> out) {
  assert(d.size() == x.size() && x.size() == out.size());
  active().mul(d.data(), x.data(), out.data(), x.size());
}

void mul_axpy(double alpha, std::span<const double> d,
              std::span<const double> x, std::span<double> y) {
  assert(d.size() == x.size() && x.size() == y.size());
  active().mul_axpy(alpha, d.data(), x.data(), y.data(), x.size());
}

void gemv(std::span<const double> a, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<double> y) {
  assert(a.size() == rows * cols && x.size() == cols && y.size() == rows);
  active().gemv(a.data(), rows, cols, x.data(), y.data());
}

}  // namespace mutctl::kernels
