// Copyright 2026 The mutctl Authors
// SPDX-License-Identifier: Apache-2.0

#include "mutctl/report.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

namespace mutctl {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void Report::set(const std::string& key, std::string value) {
  const auto [it, inserted] = index_.emplace(key, entries_.size());
  if (!inserted) {
    entries_[it->second].second = std::move(value);
    return;
  }
  entries_.emplace_back(key, std::move(value));
}

void Report::set(const std::string& key, double value) { set(key, format_double(value)); }
void Report::set(const std::string& key, int value) { set(key, std::to_string(value)); }
void Report::set(const std::string& key, bool value) {
  set(key, std::string(value ? "true" : "false"));
}

void Report::set(const std::string& key, std::span<const double> values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += ',';
    s += format_double(values[i]);
  }
  set(key, std::move(s));
}

void Report::add_solve(const SolveReport& r) {
  set("method", r.method);
  set("converged", r.converged);
  set("iterations", r.iterations);
  if (r.inner_iterations > 0) set("inner_iterations", r.inner_iterations);
  set("theta", r.theta);
  if (r.rho) set("rho", *r.rho);
  if (r.certificate) {
    const auto& m = *r.certificate;
    const double e[4] = {m.a11(), m.a12(), m.a21(), m.a22()};
    set("certificate", std::span<const double>(e));
  }
  if (r.radii) set("radii", std::span<const double>(*r.radii));
  if (r.localized) set("localized", *r.localized);
  set("defect", r.defect);
  set("defect_tolerance", r.defect_tolerance);
  if (r.forward_defect) set("forward_defect", *r.forward_defect);
  for (std::size_t i = 0; i < r.warnings.size(); ++i)
    set("warning[" + std::to_string(i) + "]", r.warnings[i]);
  set("residual_history_length", static_cast<int>(r.residual_history.size()));
  for (std::size_t i = 0; i < r.residual_history.size(); ++i)
    set("residual_history[" + std::to_string(i) + "]",
        std::span<const double>(r.residual_history[i]));
}

const std::string* Report::find(const std::string& key) const {
  const auto it = index_.find(key);
  return it == index_.end() ? nullptr : &entries_[it->second].second;
}

void Report::write_kv(std::ostream& os) const {
  for (const auto& [k, v] : entries_) os << k << '=' << v << '\n';
}

void Report::write_text(std::ostream& os, const std::string& title) const {
  os << title << '\n' << std::string(title.size(), '=') << "\n\n";
  std::size_t width = 0;
  for (const auto& [k, v] : entries_)
    if (k.rfind("residual_history[", 0) != 0) width = std::max(width, k.size());
  bool any_residual = false;
  for (const auto& [k, v] : entries_) {
    if (k.rfind("residual_history[", 0) == 0) {
      any_residual = true;
      continue;
    }
    os << k << std::string(width - k.size() + 2, ' ') << v << '\n';
  }
  if (!any_residual) return;
  os << "\nresiduals (iteration: |dx|, |dy|)\n";
  for (const auto& [k, v] : entries_) {
    if (k.rfind("residual_history[", 0) != 0) continue;
    const std::string idx = k.substr(17, k.size() - 18);
    os << "  " << idx << ": " << v << '\n';
  }
}

}  // namespace mutctl
