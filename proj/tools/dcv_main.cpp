#include <cstdlib>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dcv/cli.hpp"

namespace {

using dcv::cplx;
using dcv::cli::ExperimentConfig;

struct Flags {
  ExperimentConfig cfg;
  std::vector<double> r, s, rp, sp;
  std::string config_path;
  bool print_config = false;
  // Copies a given flag from cfg into the effective config.
  std::vector<std::pair<CLI::Option*, std::function<void(ExperimentConfig&)>>> setters;
};

cplx to_cplx(const std::vector<double>& v) {
  if (v.size() == 1) return {v[0], 0.0};
  if (v.size() == 2) return {v[0], v[1]};
  throw dcv::ConfigError("complex flags take 're' or 're,im'");
}

void add_option(CLI::App* app, Flags& f, const std::string& name) {
  auto& c = f.cfg;
  auto bind = [&](CLI::Option* opt, std::function<void(ExperimentConfig&)> copy) {
    f.setters.emplace_back(opt, std::move(copy));
  };
  if (name == "stencil") {
    bind(app->add_option("--stencil", c.stencil, "named key or inline JSON"),
         [&c](ExperimentConfig& e) { e.stencil = c.stencil; });
  } else if (name == "lagrangian") {
    bind(app->add_option("--lagrangian", c.lagrangian, "preset key or inline JSON"),
         [&c](ExperimentConfig& e) { e.lagrangian = c.lagrangian; });
  } else if (name == "p") {
    bind(app->add_option("--p", c.p, "harmonic preset: P"), [&c](ExperimentConfig& e) { e.p = c.p; });
  } else if (name == "q") {
    bind(app->add_option("--q", c.q, "harmonic preset: Q"), [&c](ExperimentConfig& e) { e.q = c.q; });
  } else if (name == "a") {
    bind(app->add_option("--a", c.a, "left endpoint"), [&c](ExperimentConfig& e) { e.a = c.a; });
  } else if (name == "b") {
    bind(app->add_option("--b", c.b, "right endpoint"), [&c](ExperimentConfig& e) { e.b = c.b; });
  } else if (name == "M") {
    bind(app->add_option("--M", c.M, "number of intervals (comma list for sweeps)")->delimiter(','),
         [&c](ExperimentConfig& e) { e.M = c.M; });
  } else if (name == "eps") {
    bind(app->add_option("--eps", c.eps, "step; must divide b - a"), [&c](ExperimentConfig& e) { e.eps = c.eps; });
  } else if (name == "fn") {
    bind(app->add_option("--fn", c.fn, "test function: sin, poly3, exp, kink"),
         [&c](ExperimentConfig& e) { e.fn = c.fn; });
  } else if (name == "shift") {
    bind(app->add_option("--shift", c.shift, "plus or minus"), [&c](ExperimentConfig& e) { e.shift = c.shift; });
  } else if (name == "closure") {
    bind(app->add_option("--closure", c.closure, "extrapolated or windowed"),
         [&c](ExperimentConfig& e) { e.closure = c.closure; });
  } else if (name == "mode") {
    bind(app->add_option("--mode", c.mode, "operator or del"), [&c](ExperimentConfig& e) { e.mode = c.mode; });
  } else if (name == "delta") {
    bind(app->add_option("--delta", c.delta, "interior margin"), [&c](ExperimentConfig& e) { e.delta = c.delta; });
  } else if (name == "alpha") {
    bind(app->add_option("--alpha", c.alpha, "x(a), comma list")->delimiter(','),
         [&c](ExperimentConfig& e) { e.alpha = c.alpha; });
  } else if (name == "beta") {
    bind(app->add_option("--beta", c.beta, "x(b), comma list")->delimiter(','),
         [&c](ExperimentConfig& e) { e.beta = c.beta; });
  } else if (name == "r" || name == "s" || name == "rp" || name == "sp") {
    std::vector<double>& dst = name == "r" ? f.r : name == "s" ? f.s : name == "rp" ? f.rp : f.sp;
    auto* opt = app->add_option("--" + name, dst, "re,im")->delimiter(',')->expected(1, 2);
    bind(opt, [&dst, name](ExperimentConfig& e) {
      const cplx z = to_cplx(dst);
      if (name == "r") e.r = z;
      if (name == "s") e.s = z;
      if (name == "rp") e.rp = z;
      if (name == "sp") e.sp = z;
    });
  } else if (name == "samples") {
    bind(app->add_option("--samples", c.samples, "random pairs"), [&c](ExperimentConfig& e) { e.samples = c.samples; });
  } else if (name == "tol") {
    bind(app->add_option("--tol", c.tol, "tolerance"), [&c](ExperimentConfig& e) { e.tol = c.tol; });
  } else if (name == "seed") {
    bind(app->add_option("--seed", c.seed, "RNG seed"), [&c](ExperimentConfig& e) { e.seed = c.seed; });
  } else if (name == "out") {
    bind(app->add_option("--out", c.out_dir, "output directory (default $DCV_OUTPUT_DIR)"),
         [&c](ExperimentConfig& e) { e.out_dir = c.out_dir; });
  } else if (name == "stem") {
    bind(app->add_option("--stem", c.stem, "output file stem"), [&c](ExperimentConfig& e) { e.stem = c.stem; });
  }
}

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config_path, "JSON experiment config");
  app->add_flag("--print-config", f.print_config, "print the effective config and exit");
  for (const char* name : {"out", "stem", "seed"}) add_option(app, f, name);
}

}  // namespace

int main(int argc, char** argv) {
  Flags flags;
  CLI::App app{"Discrete calculus of variations toolkit"};
  app.require_subcommand(0, 1);
  add_common(&app, flags);

  const std::vector<std::pair<std::string, std::vector<std::string>>> leaves{
      {"op classify", {"stencil", "a", "b", "M", "eps", "tol"}},
      {"op apply", {"stencil", "a", "b", "M", "eps", "fn", "shift"}},
      {"op decompose", {"stencil", "a", "b", "M", "eps", "tol"}},
      {"leibniz check", {"r", "s", "rp", "sp", "a", "b", "M", "eps", "samples"}},
      {"del residual", {"lagrangian", "p", "q", "stencil", "a", "b", "M", "eps", "fn", "closure"}},
      {"del solve", {"lagrangian", "p", "q", "stencil", "a", "b", "M", "eps", "alpha", "beta", "closure"}},
      {"oscillator roots", {"stencil", "p", "q", "a", "b", "M", "eps", "tol"}},
      {"converge sweep", {"stencil", "fn", "a", "b", "M", "delta", "mode", "lagrangian", "p", "q", "shift"}},
  };
  std::vector<std::pair<CLI::App*, std::string>> leaf_apps;
  for (const auto& [command, options] : leaves) {
    const auto space = command.find(' ');
    const std::string group = command.substr(0, space);
    CLI::App* parent = app.get_subcommand_no_throw(group);
    if (parent == nullptr) {
      parent = app.add_subcommand(group, group + " commands");
      parent->require_subcommand(1);
    }
    CLI::App* leaf = parent->add_subcommand(command.substr(space + 1));
    add_common(leaf, flags);
    for (const auto& name : options) add_option(leaf, flags, name);
    leaf_apps.emplace_back(leaf, command);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : dcv::cli::kConfigError;
  }

  try {
    ExperimentConfig cfg;
    if (!flags.config_path.empty()) cfg = dcv::cli::load_config(flags.config_path);
    for (const auto& [leaf, command] : leaf_apps) {
      if (leaf->parsed()) cfg.command = command;
    }
    for (const auto& [opt, copy] : flags.setters) {
      if (opt->count() > 0) copy(cfg);
    }
    if (cfg.out_dir.empty()) {
      if (const char* env = std::getenv("DCV_OUTPUT_DIR")) cfg.out_dir = env;
    }
    if (flags.print_config) {
      std::cout << dcv::cli::to_json(cfg).dump(2) << "\n";
      return 0;
    }
    if (cfg.command.empty()) {
      std::cerr << app.help();
      return dcv::cli::kConfigError;
    }
    return dcv::cli::run(cfg, std::cout, std::cerr);
  } catch (const dcv::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return dcv::cli::kConfigError;
  }
}
