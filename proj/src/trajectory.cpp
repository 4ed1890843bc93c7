// Copyright 2026 The mutctl Authors
// SPDX-License-Identifier: Apache-2.0

#include "mutctl/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "mutctl/error.hpp"
#include "mutctl/kernels.hpp"

namespace mutctl {

TimeGrid::TimeGrid(double T, int n_steps) : T_(T), n_(n_steps) {
  if (!(T > 0.0) || !std::isfinite(T))
    throw Error(ErrorKind::InvalidArgument, "grid horizon must be positive");
  if (n_steps < 1)
    throw Error(ErrorKind::InvalidArgument, "grid needs n_steps >= 1");
}

int TimeGrid::index_of(double t) const {
  const double pos = t / dt();
  const double r = std::round(pos);
  if (r < 0 || r > n_ || std::abs(pos - r) > 1e-9)
    throw Error(ErrorKind::InvalidArgument,
                "time " + std::to_string(t) + " is not a grid node");
  return static_cast<int>(r);
}

Trajectory::Trajectory(TimeGrid grid, std::size_t dim)
    : grid_(grid), dim_(dim), data_(grid.size() * dim, 0.0) {}

Trajectory::Trajectory(TimeGrid grid, const std::vector<StateVector>& values)
    : Trajectory(grid, values.empty() ? 0 : values.front().dim()) {
  require_same_dim(grid_.size(), values.size(), "Trajectory node count");
  for (std::size_t i = 0; i < values.size(); ++i) {
    require_same_dim(dim_, values[i].dim(), "Trajectory value");
    std::copy(values[i].coords().begin(), values[i].coords().end(), at(i).begin());
  }
}

Trajectory Trajectory::constant(TimeGrid grid, const StateVector& v) {
  Trajectory out(grid, v.dim());
  for (std::size_t i = 0; i < out.size(); ++i)
    std::copy(v.coords().begin(), v.coords().end(), out.at(i).begin());
  return out;
}

bool Trajectory::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

double sup_norm(const Trajectory& u) { return bielecki_norm(u, 0.0); }

double bielecki_norm(const Trajectory& u, double theta) {
  if (!(theta >= 0.0))
    throw Error(ErrorKind::InvalidArgument, "theta must be >= 0");
  double best = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double w = theta == 0.0 ? 1.0 : std::exp(-theta * u.grid().node(i));
    best = std::max(best, w * euclidean_norm(u.at(i)));
  }
  return best;
}

double bielecki_distance(const Trajectory& u, const Trajectory& v, double theta) {
  if (!(u.grid() == v.grid()))
    throw Error(ErrorKind::InvalidArgument, "trajectories live on different grids");
  require_same_dim(u.dim(), v.dim(), "bielecki_distance");
  if (!(theta >= 0.0))
    throw Error(ErrorKind::InvalidArgument, "theta must be >= 0");
  const auto& k = kernels::active();
  double best = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double w = theta == 0.0 ? 1.0 : std::exp(-theta * u.grid().node(i));
    best = std::max(best, w * std::sqrt(k.dist_sq(u.at(i).data(), v.at(i).data(), u.dim())));
  }
  return best;
}

StateVector conv(const SemigroupSpec& s, const Trajectory& w, int t_index) {
  require_same_dim(s.dim(), w.dim(), "conv");
  const TimeGrid& g = w.grid();
  if (t_index < 0 || t_index > g.n_steps())
    throw Error(ErrorKind::InvalidArgument, "conv index outside the grid");
  StateVector out(w.dim());
  if (t_index == 0) return out;
  const double dt = g.dt();
  const double t = g.node(t_index);
  for (int j = 0; j <= t_index; ++j) {
    const double weight = (j == 0 || j == t_index) ? 0.5 * dt : dt;
    s.at(t - g.node(j)).apply_add(weight, w.at(j), out.coords());
  }
  return out;
}

StateVector conv_shifted(const SemigroupSpec& s, const Trajectory& w, double t,
                         double upper) {
  require_same_dim(s.dim(), w.dim(), "conv_shifted");
  const TimeGrid& g = w.grid();
  if (!(t >= 0.0) || !(upper >= 0.0) ||
      t + upper > 2.0 * s.horizon() * (1.0 + 1e-12))
    throw Error(ErrorKind::TimeOutOfRange, "conv_shifted needs t + upper <= 2T");
  const int m = g.index_of(upper);
  StateVector out(w.dim());
  if (m == 0) return out;
  const double dt = g.dt();
  for (int j = 0; j <= m; ++j) {
    const double weight = (j == 0 || j == m) ? 0.5 * dt : dt;
    const double lag = std::max(0.0, t + upper - g.node(j));
    s.at(lag).apply_add(weight, w.at(j), out.coords());
  }
  return out;
}

GridPropagators::GridPropagators(const SemigroupSpec& s, const TimeGrid& grid)
    : grid_(grid), dim_(s.dim()) {
  nodes_.reserve(grid.size());
  for (int i = 0; i <= grid.n_steps(); ++i) nodes_.push_back(s.at(grid.node(i)));
}

void GridPropagators::flow(std::span<const double> v, Trajectory& out) const {
  require_same_dim(dim_, v.size(), "flow");
  require_same_dim(dim_, out.dim(), "flow");
  for (int i = 0; i <= grid_.n_steps(); ++i) nodes_[i].apply(v, out.at(i));
}

void GridPropagators::conv_all(const Trajectory& w, Trajectory& out) const {
  require_same_dim(dim_, w.dim(), "conv_all");
  require_same_dim(dim_, out.dim(), "conv_all");
  const double half = 0.5 * grid_.dt();
  const Propagator& step = nodes_[1];
  std::vector<double> tmp(dim_);
  std::fill(out.at(0).begin(), out.at(0).end(), 0.0);
  for (int i = 1; i <= grid_.n_steps(); ++i) {
    std::copy(out.at(i - 1).begin(), out.at(i - 1).end(), tmp.begin());
    kernels::axpy(half, w.at(i - 1), tmp);
    step.apply(tmp, out.at(i));
    kernels::axpy(half, w.at(i), out.at(i));
  }
}

void write_csv(std::ostream& os, const Trajectory& u) {
  os << 't';
  for (std::size_t d = 0; d < u.dim(); ++d) os << ",coord_" << d;
  os << '\n';
  char buf[64];
  for (std::size_t i = 0; i < u.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", u.grid().node(static_cast<int>(i)));
    os << buf;
    for (double v : u.at(i)) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      os << ',' << buf;
    }
    os << '\n';
  }
}

Trajectory read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("t", 0) != 0)
    throw Error(ErrorKind::IoError, "trajectory CSV: missing header");
  const std::size_t dim =
      static_cast<std::size_t>(std::count(line.begin(), line.end(), ','));
  std::vector<double> times;
  std::vector<StateVector> values;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != dim + 1)
      throw Error(ErrorKind::IoError, "trajectory CSV: ragged row");
    times.push_back(row.front());
    values.emplace_back(std::vector<double>(row.begin() + 1, row.end()));
  }
  if (times.size() < 2)
    throw Error(ErrorKind::IoError, "trajectory CSV: need at least two nodes");
  const TimeGrid grid(times.back(), static_cast<int>(times.size()) - 1);
  return Trajectory(grid, values);
}

}  // namespace mutctl
