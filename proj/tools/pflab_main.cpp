#include <cstdio>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pflab/config.hpp"
#include "pflab/error.hpp"
#include "pflab/experiments.hpp"
#include "pflab/log.hpp"
#include "pflab/output.hpp"

namespace {

enum ExitCode { kOk = 0, kConfig = 1, kSolver = 2, kCapacity = 3 };

struct Options {
  std::string config;
  std::optional<std::string> scale;
  std::optional<int> threads;
  std::optional<std::string> out;
  std::vector<int> cutoffs;
};

pflab::RunConfig resolve(const Options& o) {
  pflab::RunConfig cfg = pflab::load_config(o.config);
  if (o.scale) cfg.scenario.scale = pflab::parse_scale(*o.scale);
  if (o.threads) {
    cfg.threads = *o.threads;
  } else if (const char* env = std::getenv("PFLAB_THREADS")) {
    try {
      cfg.threads = std::stoi(env);
    } catch (const std::exception&) {
      throw pflab::ConfigError(std::string("PFLAB_THREADS: not an integer: '") + env + "'");
    }
  }
  if (o.out) cfg.output_dir = *o.out;
  pflab::validate(cfg);
  pflab::log::set_level(cfg.log_level);
  return cfg;
}

int cmd_run(const Options& o) {
  const pflab::RunConfig cfg = resolve(o);
  const pflab::ScenarioResult result = pflab::run_scenario(cfg);
  for (const auto& p : pflab::write_result(result, cfg)) std::cout << p.string() << '\n';
  return kOk;
}

int cmd_validate(const Options& o) {
  const pflab::RunConfig cfg = resolve(o);
  std::cout << "ok: " << pflab::to_string(cfg.scenario.kind) << " (" << pflab::to_string(cfg.scenario.scale)
            << "), largest dimension " << pflab::max_scenario_dimension(cfg.scenario) << ", budget "
            << cfg.scenario.dimension_budget() << ", config hash " << pflab::config_hash(cfg) << '\n';
  return kOk;
}

int cmd_certify(const Options& o) {
  const pflab::RunConfig cfg = resolve(o);
  const pflab::ConvergenceTable t = pflab::certify_scenario(cfg, o.cutoffs);
  std::printf("%8s %12s %22s\n", "cutoff", "dimension", "energy");
  for (const auto& p : t.points) std::printf("%8d %12zu %22.14f\n", p.cutoff, p.dimension, p.energy);
  std::printf("increment %.3e, monotone %s, threshold %.1e -> %s\n", t.increment, t.monotone ? "yes" : "no",
              cfg.scenario.truncation.certificate_threshold,
              t.increment <= cfg.scenario.truncation.certificate_threshold ? "certified" : "provisional");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ground states of matter coupled to many photon modes"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "Configuration file (YAML or JSON)")->required();
    sub->add_option("--scale", o.scale, "desk or full")->check(CLI::IsMember({"desk", "full"}));
    sub->add_option("--threads", o.threads, "Worker threads (fallback: PFLAB_THREADS)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", o.out, "Output directory");
  };
  CLI::App* run = app.add_subcommand("run", "Run a scenario and write its tables");
  add_common(run);
  CLI::App* validate = app.add_subcommand("validate", "Parse and check a configuration");
  add_common(validate);
  CLI::App* certify = app.add_subcommand("certify", "Fock-cutoff convergence sweep of the exact strategy");
  add_common(certify);
  certify->add_option("--cutoffs", o.cutoffs, "Cutoffs to sweep (default: around the configured one)");
  CLI::App* list = app.add_subcommand("list-scenarios", "Print the scenario names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (list->parsed()) {
      for (auto k : pflab::all_scenarios()) std::cout << pflab::to_string(k) << '\n';
      return kOk;
    }
    if (run->parsed()) return cmd_run(o);
    if (validate->parsed()) return cmd_validate(o);
    if (certify->parsed()) return cmd_certify(o);
  } catch (const pflab::CapacityError& e) {
    std::cerr << "capacity refusal: " << e.what() << " (dimension " << e.dimension() << ")\n";
    return kCapacity;
  } catch (const pflab::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << " (best residual " << e.best_residual() << ")\n";
    return kSolver;
  } catch (const pflab::IterationError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kSolver;
  } catch (const pflab::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  }
  return kOk;
}
