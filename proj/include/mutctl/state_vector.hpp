// Copyright 2026 The mutctl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace mutctl {

/// Coordinates of an element of the state space X in the active
/// representation (plain coordinates, or sine-mode coefficients for L^2).
class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(std::size_t dim, double fill = 0.0) : c_(dim, fill) {}
  StateVector(std::initializer_list<double> values) : c_(values) {}
  explicit StateVector(std::vector<double> coords) : c_(std::move(coords)) {}
  explicit StateVector(std::span<const double> coords)
      : c_(coords.begin(), coords.end()) {}

  static StateVector basis(std::size_t dim, std::size_t k);

  std::size_t dim() const { return c_.size(); }
  std::span<const double> coords() const { return c_; }
  std::span<double> coords() { return c_; }
  const std::vector<double>& values() const { return c_; }
  double operator[](std::size_t i) const { return c_[i]; }
  double& operator[](std::size_t i) { return c_[i]; }

  /// Euclidean norm of the coordinates.
  double norm() const;

  StateVector& operator+=(const StateVector& rhs);
  StateVector& operator-=(const StateVector& rhs);
  StateVector& operator*=(double s);

  friend StateVector operator+(StateVector lhs, const StateVector& rhs) {
    return lhs += rhs;
  }
  friend StateVector operator-(StateVector lhs, const StateVector& rhs) {
    return lhs -= rhs;
  }
  friend StateVector operator*(double s, StateVector v) { return v *= s; }
  friend StateVector operator*(StateVector v, double s) { return v *= s; }
  friend bool operator==(const StateVector&, const StateVector&) = default;

 private:
  std::vector<double> c_;
};

double euclidean_norm(std::span<const double> v);
double euclidean_distance(std::span<const double> a, std::span<const double> b);

/// Throws Error(DimensionMismatch) naming `what` when the sizes differ.
void require_same_dim(std::size_t expected, std::size_t got, const char* what);

}  // namespace mutctl
