// Copyright 2026 The mutctl Authors
// SPDX-License-Identifier: Apache-2.0

#include "mutctl/state_vector.hpp"

#include <cmath>
#include <string>

#include "mutctl/error.hpp"
#include "mutctl/kernels.hpp"

namespace mutctl {

StateVector StateVector::basis(std::size_t dim, std::size_t k) {
  StateVector v(dim);
  if (k >= dim)
    throw Error(ErrorKind::InvalidArgument, "basis index out of range");
  v[k] = 1.0;
  return v;
}

double StateVector::norm() const { return euclidean_norm(c_); }

StateVector& StateVector::operator+=(const StateVector& rhs) {
  require_same_dim(dim(), rhs.dim(), "StateVector +=");
  kernels::axpy(1.0, rhs.c_, c_);
  return *this;
}

StateVector& StateVector::operator-=(const StateVector& rhs) {
  require_same_dim(dim(), rhs.dim(), "StateVector -=");
  kernels::axpy(-1.0, rhs.c_, c_);
  return *this;
}

StateVector& StateVector::operator*=(double s) {
  for (double& x : c_) x *= s;
  return *this;
}

double euclidean_norm(std::span<const double> v) {
  return std::sqrt(kernels::sum_sq(v));
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  require_same_dim(a.size(), b.size(), "distance");
  return std::sqrt(kernels::dist_sq(a, b));
}

void require_same_dim(std::size_t expected, std::size_t got, const char* what) {
  if (expected != got)
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + ": expected dimension " +
                    std::to_string(expected) + ", got " + std::to_string(got));
}

}  // namespace mutctl
