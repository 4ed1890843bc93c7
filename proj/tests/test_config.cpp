// Copyright 2026 The mutctl Authors
// SPDX-License-Identifier: Apache-2.0

#include <string>

#include "doctest.h"
#include "mutctl/config.hpp"

using namespace mutctl;

namespace {

std::string error_of(const std::string& text, const std::vector<std::string>& ov = {},
                     ErrorKind* kind = nullptr) {
  try {
    parse_config(text, ov);
  } catch (const Error& e) {
    if (kind) *kind = e.kind();
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("minimal document yields the defaults") {
  const auto cfg = parse_config(R"({"schema_version": 1})");
  CHECK(cfg.problem.a == 1.0);
  CHECK(cfg.problem.T == 1.0);
  CHECK(cfg.n_steps == 256);
  CHECK(cfg.solver.tol == 1e-10);
  CHECK(cfg.solver.relaxation == 0.5);
  CHECK(cfg.solver.certify);
  CHECK(cfg.solver.theta == 0.0);
  CHECK_FALSE(cfg.theta_auto);
  CHECK(cfg.scheme == Scheme::Auto);
  CHECK(cfg.nonlinearity == "zero");
  CHECK(cfg.semigroup.kind == SemigroupKind::Scalar);
  CHECK(cfg.output_dir == "out");
  CHECK(!cfg.command);
}

TEST_CASE("schema_version is required and pinned") {
  ErrorKind kind{};
  CHECK(error_of("{}", {}, &kind).find("schema_version") != std::string::npos);
  CHECK(kind == ErrorKind::SchemaError);
  error_of(R"({"schema_version": 2})", {}, &kind);
  CHECK(kind == ErrorKind::SchemaError);
  error_of("{not json", {}, &kind);
  CHECK(kind == ErrorKind::SchemaError);
}

TEST_CASE("range errors name the offending key") {
  ErrorKind kind{};
  const auto msg = error_of(R"({"schema_version": 1, "problem": {"a": -1}})", {}, &kind);
  CHECK(kind == ErrorKind::RangeError);
  CHECK(msg.find("problem.a") != std::string::npos);
  error_of(R"({"schema_version": 1, "solver": {"relaxation": 1.5}})", {}, &kind);
  CHECK(kind == ErrorKind::RangeError);
  error_of(R"({"schema_version": 1, "grid": {"n_steps": 0}})", {}, &kind);
  CHECK(kind == ErrorKind::RangeError);
}

TEST_CASE("schema errors carry the key path") {
  ErrorKind kind{};
  auto msg = error_of(R"({"schema_version": 1, "problem": {"bogus": 1}})", {}, &kind);
  CHECK(kind == ErrorKind::SchemaError);
  CHECK(msg.find("problem.bogus") != std::string::npos);
  msg = error_of(R"({"schema_version": 1, "problem": {"a": "two"}})", {}, &kind);
  CHECK(kind == ErrorKind::SchemaError);
  CHECK(msg.find("problem.a") != std::string::npos);
  msg = error_of(R"({"schema_version": 1, "extra": true})", {}, &kind);
  CHECK(msg.find("extra") != std::string::npos);
}

TEST_CASE("unknown nonlinearity fails at parse time") {
  ErrorKind kind{};
  const auto msg =
      error_of(R"({"schema_version": 1, "nonlinearity": {"name": "cubic"}})", {}, &kind);
  CHECK(kind == ErrorKind::SchemaError);
  CHECK(msg.find("cubic") != std::string::npos);
}

TEST_CASE("overrides are applied before validation") {
  const std::string base = R"({"schema_version": 1, "problem": {"a": 2}, "beta": [1, 2]})";
  auto cfg = parse_config(base, {"problem.a=3.5", "beta.1=7", "solver.theta=auto",
                                 "nonlinearity.name=sin-cos", "output_dir=res"});
  CHECK(cfg.problem.a == 3.5);
  CHECK(cfg.beta == std::vector<double>{1.0, 7.0});
  CHECK(cfg.theta_auto);
  CHECK(cfg.nonlinearity == "sin-cos");
  CHECK(cfg.output_dir == "res");

  ErrorKind kind{};
  error_of(base, {"problem.a=-2"}, &kind);
  CHECK(kind == ErrorKind::RangeError);
  error_of(base, {"beta.5=1"}, &kind);
  CHECK(kind == ErrorKind::SchemaError);
  error_of(base, {"novalue"}, &kind);
  CHECK(kind == ErrorKind::SchemaError);
}

TEST_CASE("sections parse into their fields") {
  const auto cfg = parse_config(R"({
    "schema_version": 1,
    "command": "sweep-theta",
    "semigroup": {"kind": "heat1d", "L": 2, "nu": 0.5, "n_modes": 8},
    "solver": {"theta": 1.5, "tol": 1e-9, "scheme": "avramescu", "x_guess": [0.25]},
    "nonlinearity": {"name": "sqrt-bounded", "params": [0.2, 0.1, 0.1], "condition": "c2"},
    "lipschitz": {"a11": 0.1, "a12": 0.2, "a21": 0.3, "a22": 0.4, "mode": "mixed"},
    "matrix": [[0.5, 0.2], [0.1, 0.3]],
    "theta_search": {"a11": 0.3, "a12": 0.7, "a21": 0.1, "a22": 0.9},
    "sweep": {"theta_min": 0.5, "theta_max": 4, "samples": 8}
  })");
  CHECK(cfg.command == Command::SweepTheta);
  CHECK(cfg.semigroup.kind == SemigroupKind::Heat1D);
  CHECK(cfg.semigroup.L == 2.0);
  CHECK(cfg.semigroup.n_modes == 8);
  CHECK(cfg.solver.theta == 1.5);
  CHECK(cfg.solver.tol == 1e-9);
  CHECK(cfg.scheme == Scheme::Avramescu);
  REQUIRE(cfg.solver.x_guess);
  CHECK((*cfg.solver.x_guess)[0] == 0.25);
  CHECK(cfg.condition == ConditionClass::C2);
  REQUIRE(cfg.lipschitz);
  CHECK(cfg.lipschitz->a22 == 0.4);
  CHECK(cfg.lipschitz->mode == GrowthMode::Mixed);
  REQUIRE(cfg.matrix);
  CHECK(cfg.matrix->a12() == 0.2);
  REQUIRE(cfg.theta_coefficients);
  CHECK(cfg.theta_coefficients->a12 == 0.7);
  CHECK(cfg.theta_coefficients->T == 1.0);
  CHECK(cfg.sweep.theta_min == 0.5);
  CHECK(cfg.sweep.theta_max == 4.0);
  CHECK(cfg.sweep.samples == 8);
}

TEST_CASE("sweep plan is checked for consistency") {
  ErrorKind kind{};
  error_of(R"({"schema_version": 1, "sweep": {"theta_min": 3, "theta_max": 1}})", {}, &kind);
  CHECK(kind == ErrorKind::RangeError);
  error_of(R"({"schema_version": 1, "sweep": {"samples": 0}})", {}, &kind);
  CHECK(kind == ErrorKind::RangeError);
}

TEST_CASE("negative matrix entries are range errors") {
  ErrorKind kind{};
  error_of(R"({"schema_version": 1, "matrix": [[0.5, -0.2], [0.1, 0.3]]})", {}, &kind);
  CHECK(kind == ErrorKind::RangeError);
}

TEST_CASE("command names round-trip") {
  for (const char* name : {"analyze-matrix", "find-theta", "solve-semi", "solve-observe",
                           "demo-diffusion", "sweep-theta", "self-test"}) {
    const auto c = parse_command(name);
    REQUIRE(c);
    CHECK(to_string(*c) == name);
  }
  CHECK(!parse_command("solve"));
}
