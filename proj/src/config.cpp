// Copyright 2026 The mutctl Authors
// SPDX-License-Identifier: Apache-2.0

#include "mutctl/config.hpp"

#include <cmath>
#include <set>

#include "json.hpp"

namespace mutctl {

using json = nlohmann::json;

std::string_view to_string(Command c) {
  switch (c) {
    case Command::AnalyzeMatrix: return "analyze-matrix";
    case Command::FindTheta: return "find-theta";
    case Command::SolveSemi: return "solve-semi";
    case Command::SolveObserve: return "solve-observe";
    case Command::DemoDiffusion: return "demo-diffusion";
    case Command::SweepTheta: return "sweep-theta";
    case Command::SelfTest: return "self-test";
  }
  return "unknown";
}

std::optional<Command> parse_command(std::string_view text) {
  for (Command c : {Command::AnalyzeMatrix, Command::FindTheta, Command::SolveSemi,
                    Command::SolveObserve, Command::DemoDiffusion,
                    Command::SweepTheta, Command::SelfTest})
    if (to_string(c) == text) return c;
  return std::nullopt;
}

std::string_view to_string(SemigroupKind k) {
  switch (k) {
    case SemigroupKind::Scalar: return "scalar";
    case SemigroupKind::Matrix: return "matrix";
    case SemigroupKind::Heat1D: return "heat1d";
  }
  return "unknown";
}

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::Auto: return "auto";
    case Scheme::Perov: return "perov";
    case Scheme::Schauder: return "schauder";
    case Scheme::Avramescu: return "avramescu";
  }
  return "unknown";
}

namespace {

[[noreturn]] void schema(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::SchemaError, path + ": " + what);
}

[[noreturn]] void range(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::RangeError, path + " " + what);
}

// Typed, path-aware access to one JSON object; finish() rejects every key
// that was never read.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) schema(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string path_of(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  const json* raw(std::string_view key) {
    used_.insert(std::string(key));
    const auto it = j_.find(std::string(key));
    return it == j_.end() ? nullptr : &*it;
  }

  bool has(std::string_view key) const { return j_.contains(std::string(key)); }

  double number(std::string_view key, double def) {
    const json* v = raw(key);
    if (!v) return def;
    if (!v->is_number()) schema(path_of(key), "expected a number");
    const double d = v->get<double>();
    if (!std::isfinite(d)) range(path_of(key), "must be finite");
    return d;
  }

  int integer(std::string_view key, int def) {
    const json* v = raw(key);
    if (!v) return def;
    if (!v->is_number_integer()) schema(path_of(key), "expected an integer");
    return v->get<int>();
  }

  bool boolean(std::string_view key, bool def) {
    const json* v = raw(key);
    if (!v) return def;
    if (!v->is_boolean()) schema(path_of(key), "expected true or false");
    return v->get<bool>();
  }

  std::string string(std::string_view key, std::string def) {
    const json* v = raw(key);
    if (!v) return def;
    if (!v->is_string()) schema(path_of(key), "expected a string");
    return v->get<std::string>();
  }

  std::vector<double> numbers(std::string_view key) {
    const json* v = raw(key);
    if (!v) return {};
    if (v->is_number()) return {v->get<double>()};
    if (!v->is_array()) schema(path_of(key), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v->size(); ++i) {
      if (!(*v)[i].is_number())
        schema(path_of(key) + "[" + std::to_string(i) + "]", "expected a number");
      out.push_back((*v)[i].get<double>());
    }
    return out;
  }

  std::optional<Section> child(std::string_view key) {
    const json* v = raw(key);
    if (!v) return std::nullopt;
    return Section(*v, path_of(key));
  }

  void finish() const {
    for (const auto& [key, value] : j_.items())
      if (!used_.count(key)) schema(path_of(key), "unknown key");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

void apply_override(json& doc, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0)
    throw Error(ErrorKind::SchemaError, "override '" + spec + "': expected key=value");
  const std::string path = spec.substr(0, eq);
  const std::string text = spec.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string seg = path.substr(start, dot == std::string::npos ? dot : dot - start);
    if (seg.empty()) throw Error(ErrorKind::SchemaError, "override '" + spec + "': empty key");
    if (node->is_array()) {
      std::size_t idx = 0;
      try {
        idx = std::stoul(seg);
      } catch (const std::exception&) {
        throw Error(ErrorKind::SchemaError, path + ": expected an array index");
      }
      if (idx >= node->size()) throw Error(ErrorKind::SchemaError, path + ": index out of range");
      node = &(*node)[idx];
    } else {
      if (node->is_null()) *node = json::object();
      if (!node->is_object()) throw Error(ErrorKind::SchemaError, path + ": not an object");
      node = &(*node)[seg];
    }
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  *node = std::move(value);
}

void parse_problem(Section s, ProblemParams& p) {
  p.a = s.number("a", p.a);
  p.b = s.number("b", p.b);
  p.k = s.number("k", p.k);
  p.T = s.number("T", p.T);
  s.finish();
  p.validate();
}

void parse_semigroup(Section s, SemigroupDesc& d) {
  const std::string kind = s.string("kind", "scalar");
  if (kind == "scalar") {
    d.kind = SemigroupKind::Scalar;
    d.lambda = s.number("lambda", 0.0);
  } else if (kind == "matrix") {
    d.kind = SemigroupKind::Matrix;
    const int n = s.integer("n", 0);
    if (n < 1) range(s.path_of("n"), "must be >= 1");
    d.n = static_cast<std::size_t>(n);
    d.generator = s.numbers("A");
    if (d.generator.size() != d.n * d.n)
      range(s.path_of("A"), "must hold n*n = " + std::to_string(d.n * d.n) +
                                " row-major entries");
  } else if (kind == "heat1d") {
    d.kind = SemigroupKind::Heat1D;
    d.L = s.number("L", 1.0);
    d.nu = s.number("nu", 1.0);
    d.n_modes = s.integer("n_modes", 32);
    d.n_quad = s.integer("n_quad", 0);
    if (!(d.L > 0.0)) range(s.path_of("L"), "must be > 0");
    if (!(d.nu > 0.0)) range(s.path_of("nu"), "must be > 0");
    if (d.n_modes < 1) range(s.path_of("n_modes"), "must be >= 1");
    if (d.n_quad != 0 && d.n_quad < 2 * d.n_modes)
      range(s.path_of("n_quad"), "must be 0 or >= 2 n_modes");
  } else {
    schema(s.path_of("kind"), "expected scalar, matrix or heat1d");
  }
  s.finish();
}

void parse_solver(Section s, RunConfig& cfg) {
  SolverConfig& c = cfg.solver;
  if (const json* th = s.raw("theta")) {
    if (th->is_string() && th->get<std::string>() == "auto") {
      cfg.theta_auto = true;
    } else if (th->is_number()) {
      c.theta = th->get<double>();
    } else {
      schema(s.path_of("theta"), "expected a number or \"auto\"");
    }
  }
  c.tol = s.number("tol", c.tol);
  c.max_iter = s.integer("max_iter", c.max_iter);
  c.relaxation = s.number("relaxation", c.relaxation);
  c.certify = s.boolean("certify", c.certify);
  c.c1_with_T = s.boolean("c1_with_T", c.c1_with_T);
  c.forward_refine = s.integer("forward_refine", c.forward_refine);
  if (s.has("x_guess")) c.x_guess = StateVector(s.numbers("x_guess"));
  const std::string scheme = s.string("scheme", "auto");
  if (scheme == "auto") cfg.scheme = Scheme::Auto;
  else if (scheme == "perov") cfg.scheme = Scheme::Perov;
  else if (scheme == "schauder") cfg.scheme = Scheme::Schauder;
  else if (scheme == "avramescu") cfg.scheme = Scheme::Avramescu;
  else schema(s.path_of("scheme"), "expected auto, perov, schauder or avramescu");
  s.finish();
  c.validate();
}

LipschitzData parse_lipschitz(Section s) {
  LipschitzData l;
  l.a11 = s.number("a11", 0.0);
  l.a12 = s.number("a12", 0.0);
  l.a21 = s.number("a21", 0.0);
  l.a22 = s.number("a22", 0.0);
  l.g13 = s.number("g13", 0.0);
  l.g23 = s.number("g23", 0.0);
  const std::string mode = s.string("mode", "lipschitz");
  if (mode == "lipschitz") l.mode = GrowthMode::Lipschitz;
  else if (mode == "growth") l.mode = GrowthMode::Growth;
  else if (mode == "mixed") l.mode = GrowthMode::Mixed;
  else schema(s.path_of("mode"), "expected lipschitz, growth or mixed");
  s.finish();
  l.validate();
  return l;
}

double nonneg(Section& s, std::string_view key) {
  const double v = s.number(key, 0.0);
  if (!(v >= 0.0)) range(s.path_of(key), "must be >= 0");
  return v;
}

NonnegMatrix2 parse_matrix(const json& j) {
  if (j.is_array()) {
    if (j.size() != 2 || !j[0].is_array() || !j[1].is_array() || j[0].size() != 2 ||
        j[1].size() != 2)
      schema("matrix", "expected [[a11, a12], [a21, a22]]");
    double e[4];
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) {
        const auto& v = j[r][c];
        const std::string path = "matrix[" + std::to_string(r) + "][" + std::to_string(c) + "]";
        if (!v.is_number()) schema(path, "expected a number");
        e[2 * r + c] = v.get<double>();
        if (!(e[2 * r + c] >= 0.0) || !std::isfinite(e[2 * r + c]))
          range(path, "must be finite and >= 0");
      }
    return {e[0], e[1], e[2], e[3]};
  }
  Section s(j, "matrix");
  const double a11 = nonneg(s, "a11"), a12 = nonneg(s, "a12"), a21 = nonneg(s, "a21"),
               a22 = nonneg(s, "a22");
  s.finish();
  return {a11, a12, a21, a22};
}

}  // namespace

RunConfig parse_config(std::string_view text, const std::vector<std::string>& overrides) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::SchemaError, std::string("<document>: ") + e.what());
  }
  for (const auto& o : overrides) apply_override(doc, o);

  RunConfig cfg;
  Section root(doc, "");
  const json* version = root.raw("schema_version");
  if (!version) schema("schema_version", "required");
  if (!version->is_number_integer() || version->get<int>() != 1)
    schema("schema_version", "only version 1 is supported");

  if (root.has("command")) {
    const std::string name = root.string("command", "");
    cfg.command = parse_command(name);
    if (!cfg.command) schema("command", "unknown command '" + name + "'");
  }
  if (auto s = root.child("problem")) parse_problem(*s, cfg.problem);
  if (auto s = root.child("semigroup")) parse_semigroup(*s, cfg.semigroup);
  if (auto s = root.child("grid")) {
    cfg.n_steps = s->integer("n_steps", cfg.n_steps);
    s->finish();
    if (cfg.n_steps < 1) range("grid.n_steps", "must be >= 1");
  }
  if (auto s = root.child("solver")) parse_solver(*s, cfg);
  if (auto s = root.child("nonlinearity")) {
    cfg.nonlinearity = s->string("name", cfg.nonlinearity);
    cfg.nonlinearity_params = s->numbers("params");
    if (s->has("condition")) cfg.condition = parse_condition(s->string("condition", ""));
    s->finish();
  }
  // Resolve the name now so unknown builtins fail at parse time.
  make_nonlinearity(cfg.nonlinearity, cfg.nonlinearity_params, cfg.condition);
  if (auto s = root.child("lipschitz")) cfg.lipschitz = parse_lipschitz(*s);

  cfg.beta = root.numbers("beta");
  cfg.alpha0 = root.numbers("alpha0");
  cfg.beta0 = root.numbers("beta0");
  if (const json* m = root.raw("matrix")) cfg.matrix = parse_matrix(*m);
  if (auto s = root.child("theta_search")) {
    ThetaCoefficients c;
    c.a11 = nonneg(*s, "a11");
    c.a12 = nonneg(*s, "a12");
    c.a21 = nonneg(*s, "a21");
    c.a22 = nonneg(*s, "a22");
    c.T = s->number("T", cfg.problem.T);
    if (!(c.T > 0.0)) range(s->path_of("T"), "must be > 0");
    cfg.theta_coefficients = c;
    cfg.theta_max = s->number("theta_max", 0.0);
    if (!(cfg.theta_max >= 0.0)) range(s->path_of("theta_max"), "must be >= 0");
    cfg.theta_grid = s->integer("grid_size", cfg.theta_grid);
    if (cfg.theta_grid < 8) range(s->path_of("grid_size"), "must be >= 8");
    s->finish();
  }
  if (auto s = root.child("sweep")) {
    cfg.sweep.theta_min = s->number("theta_min", cfg.sweep.theta_min);
    cfg.sweep.theta_max = s->number("theta_max", cfg.sweep.theta_max);
    cfg.sweep.samples = s->integer("samples", cfg.sweep.samples);
    s->finish();
    if (!(cfg.sweep.theta_min >= 0.0)) range("sweep.theta_min", "must be >= 0");
    if (!(cfg.sweep.theta_max >= cfg.sweep.theta_min))
      range("sweep.theta_max", "must be >= sweep.theta_min");
    if (cfg.sweep.samples < 1) range("sweep.samples", "must be >= 1");
  }
  cfg.output_dir = root.string("output_dir", cfg.output_dir);
  root.finish();
  return cfg;
}

}  // namespace mutctl
