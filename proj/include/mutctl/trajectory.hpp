// Copyright 2026 The mutctl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Uniform time grids on [0, T], X-valued trajectories sampled on them,
// Bielecki norms, and trapezoidal quadrature of semigroup convolutions.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "mutctl/semigroup.hpp"
#include "mutctl/state_vector.hpp"

namespace mutctl {

class TimeGrid {
 public:
  TimeGrid(double T, int n_steps);

  double horizon() const { return T_; }
  int n_steps() const { return n_; }
  std::size_t size() const { return static_cast<std::size_t>(n_) + 1; }
  double dt() const { return T_ / n_; }
  double node(int i) const { return (i == n_) ? T_ : T_ * i / n_; }
  /// Index of the node equal to `t` (to 1e-9 dt); throws InvalidArgument.
  int index_of(double t) const;

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  double T_;
  int n_;
};

/// Node values stored contiguously, one row of `dim` coordinates per node.
class Trajectory {
 public:
  Trajectory(TimeGrid grid, std::size_t dim);
  Trajectory(TimeGrid grid, const std::vector<StateVector>& values);

  static Trajectory constant(TimeGrid grid, const StateVector& v);

  const TimeGrid& grid() const { return grid_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return grid_.size(); }

  std::span<const double> at(std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }
  std::span<double> at(std::size_t i) { return {data_.data() + i * dim_, dim_}; }
  StateVector value(std::size_t i) const { return StateVector(at(i)); }
  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  bool all_finite() const;

 private:
  TimeGrid grid_;
  std::size_t dim_;
  std::vector<double> data_;
};

/// max_i |u(t_i)|_X
double sup_norm(const Trajectory& u);
/// max_i e^{-theta t_i} |u(t_i)|_X
double bielecki_norm(const Trajectory& u, double theta);
/// Bielecki norm of u - v without materializing the difference.
double bielecki_distance(const Trajectory& u, const Trajectory& v, double theta);

/// Composite trapezoid approximation of int_0^{t_i} S(t_i - s) w(s) ds,
/// summed term by term.
StateVector conv(const SemigroupSpec& s, const Trajectory& w, int t_index);

/// Trapezoid approximation of int_0^{upper} S(t + upper - s) w(s) ds on the
/// grid nodes up to `upper` (which must be a node). Requires t + upper <= 2T.
StateVector conv_shifted(const SemigroupSpec& s, const Trajectory& w, double t,
                         double upper);

/// Grid-resident propagators: S(t_i) for every node and the one-step
/// operator used by the trapezoid recursion.
class GridPropagators {
 public:
  GridPropagators(const SemigroupSpec& s, const TimeGrid& grid);

  const TimeGrid& grid() const { return grid_; }
  std::size_t dim() const { return dim_; }
  const Propagator& at_node(int i) const { return nodes_[i]; }
  const Propagator& step() const { return nodes_[1]; }

  /// out_i = S(t_i) v for every node.
  void flow(std::span<const double> v, Trajectory& out) const;

  /// out_i = trapezoid convolution at t_i for every node, via
  /// I_i = S(dt) (I_{i-1} + dt/2 w_{i-1}) + dt/2 w_i. Equal to the term-by-term
  /// sum because S(dt)^m = S(m dt).
  void conv_all(const Trajectory& w, Trajectory& out) const;

 private:
  TimeGrid grid_;
  std::size_t dim_;
  std::vector<Propagator> nodes_;
};

/// Header `t,coord_0,...,coord_{d-1}`, one row per node, 17 significant
/// digits.
void write_csv(std::ostream& os, const Trajectory& u);
Trajectory read_csv(std::istream& is);

}  // namespace mutctl
