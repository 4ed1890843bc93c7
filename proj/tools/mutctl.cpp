// Copyright 2026 The mutctl Authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mutctl/config.hpp"
#include "mutctl/kernels.hpp"
#include "mutctl/run.hpp"

namespace {

struct Options {
  std::string config;
  std::string out;
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
};

std::string read_text(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw mutctl::Error(mutctl::ErrorKind::IoError, "cannot read " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// Configuration failures still leave a machine-readable report when the
// output directory is known.
void write_error_report(const std::string& dir, const std::string& command,
                        const mutctl::Error& e, int code) {
  if (dir.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) return;
  mutctl::Report r;
  r.set("command", command);
  r.set("status", "error");
  r.set("error_class", std::string(mutctl::to_string(e.kind())));
  r.set("error_message", e.what());
  r.set("exit_code", code);
  std::ofstream kv(std::filesystem::path(dir) / "report.kv", std::ios::binary);
  r.write_kv(kv);
  std::ofstream txt(std::filesystem::path(dir) / "report.txt", std::ios::binary);
  r.write_text(txt, "mutctl " + command);
}

int execute(const std::string& command, const Options& opt) {
  try {
    const std::string text =
        opt.config.empty() ? std::string(R"({"schema_version": 1})") : read_text(opt.config);
    mutctl::RunConfig cfg = mutctl::parse_config(text, opt.overrides);
    cfg.command = mutctl::parse_command(command);
    if (!opt.out.empty()) cfg.output_dir = opt.out;
    cfg.seed = opt.seed;
    return mutctl::run(cfg, std::cout);
  } catch (const mutctl::Error& e) {
    const int code = mutctl::exit_code_for(e.kind());
    std::cerr << "mutctl " << command << ": " << mutctl::to_string(e.kind()) << ": "
              << e.what() << '\n';
    write_error_report(opt.out, command, e, code);
    return code;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fixed-point solver for mutual control of evolution systems"};
  app.require_subcommand(1);
  std::string kernels;
  app.add_option("--kernels", kernels, "Force a kernel backend (scalar, avx2, neon)");

  Options opt;
  const std::pair<const char*, const char*> commands[] = {
      {"analyze-matrix", "Convergence analysis of a 2x2 nonnegative matrix"},
      {"find-theta", "Search the Bielecki exponent window"},
      {"solve-semi", "Solve the semi-observability problem"},
      {"solve-observe", "Solve the observability problem"},
      {"demo-diffusion", "Reaction-diffusion demo on (0, L)"},
      {"sweep-theta", "Tabulate h, rho and solver outcomes over theta"},
      {"self-test", "Run the built-in checks"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config, "JSON configuration file");
    sub->add_option("--out", opt.out, "Output directory");
    sub->add_option("--override", opt.overrides, "key=value, applied before validation")
        ->expected(1)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    sub->add_option("--seed", opt.seed, "Reserved; all algorithms are deterministic");
  }
  CLI11_PARSE(app, argc, argv);

  if (!kernels.empty()) {
    const auto b = mutctl::kernels::parse_backend(kernels);
    if (!b || !mutctl::kernels::select(*b)) {
      std::cerr << "mutctl: kernel backend '" << kernels << "' is not available\n";
      return mutctl::kExitUsage;
    }
  }
  return execute(app.get_subcommands().front()->get_name(), opt);
}
