// Copyright 2026 The mutctl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Ordered key-value run report, rendered as report.kv (one `key=value` per
// line) and report.txt (aligned, with the residual table).

#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mutctl/solver.hpp"

namespace mutctl {

/// Shortest round-trip text for a double ("%.17g").
std::string format_double(double v);

class Report {
 public:
  void set(const std::string& key, std::string value);
  void set(const std::string& key, const char* value) { set(key, std::string(value)); }
  void set(const std::string& key, double value);
  void set(const std::string& key, int value);
  void set(const std::string& key, bool value);
  void set(const std::string& key, std::span<const double> values);

  /// Adds every SolveReport field; residual pairs become
  /// residual_history[i]=r1,r2.
  void add_solve(const SolveReport& r);

  /// Value of `key`, or nullptr.
  const std::string* find(const std::string& key) const;
  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }

  void write_kv(std::ostream& os) const;
  void write_text(std::ostream& os, const std::string& title) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace mutctl
