#include <string>

#include "doctest.h"
#include "pflab/config.hpp"
#include "pflab/error.hpp"
#include "pflab/output.hpp"

using namespace pflab;

namespace {

const char* kMinimal = R"(
scenario: gauge_check
matter:
  model: atom
  n_points: 101
  spacing: 0.4
bath:
  omega_min: 0.1
  n_modes: 1
lambda: [0.0, 0.05]
)";

std::string error_of(const std::string& text) {
  try {
    (void)parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("minimal configuration fills in defaults") {
  const RunConfig cfg = parse_config(kMinimal);
  const Scenario& s = cfg.scenario;
  CHECK(s.kind == ScenarioKind::gauge_check);
  CHECK(s.scale == Scale::desk);
  CHECK(s.matter.kind == MatterKind::atom);
  CHECK(s.matter.atom.grid.size() == 101);
  CHECK(s.matter.atom.softening_a_en == 2.0);
  CHECK(s.bath.omega_max == 0.5);
  CHECK(s.lambdas == std::vector<double>{0.0, 0.05});
  CHECK(s.solver == SolverConfig{});
  CHECK(cfg.threads == 1);
  CHECK(s.dimension_budget() == kDeskDimensionBudget);
}

TEST_CASE("JSON input is accepted") {
  const RunConfig cfg = parse_config(
      R"({"scenario": "mode_occupation", "matter": {"model": "atom", "n_points": 51, "spacing": 0.5},
          "bath": {"n_modes": 4}, "lambda": [0.01], "strategies": ["exact"]})");
  CHECK(cfg.scenario.kind == ScenarioKind::mode_occupation);
  CHECK(cfg.scenario.strategies == std::vector<Strategy>{Strategy::exact});
}

TEST_CASE("zero frequency is rejected with the infrared explanation") {
  std::string text = kMinimal;
  text.replace(text.find("omega_min: 0.1"), 14, "omega_min: 0.0");
  const std::string msg = error_of(text);
  CHECK(msg.find("bath.omega_min") != std::string::npos);
  CHECK(msg.find("infrared") != std::string::npos);
}

TEST_CASE("negative coupling is rejected with the valid range") {
  std::string text = kMinimal;
  text.replace(text.find("[0.0, 0.05]"), 11, "[-0.01]");
  const std::string msg = error_of(text);
  CHECK(msg.find("lambda") != std::string::npos);
  CHECK(msg.find(">= 0") != std::string::npos);
}

TEST_CASE("unknown keys report their path") {
  std::string text = kMinimal;
  text.replace(text.find("  spacing: 0.4"), 14, "  spacing: 0.4\n  spaceing: 0.4");
  const std::string msg = error_of(text);
  CHECK(msg.find("matter.spaceing") != std::string::npos);
  CHECK(error_of(std::string(kMinimal) + "frobnicate: 1\n").find("frobnicate") != std::string::npos);
}

TEST_CASE("cross-field and range checks") {
  CHECK_FALSE(error_of("matter:\n  model: atom\nlambda: [0.1]\n").empty());
  CHECK_FALSE(error_of(std::string(kMinimal) + "threads: 0\n").empty());
  CHECK_FALSE(error_of(std::string(kMinimal) + "strategies: [exact, exact]\n").empty());
  CHECK_FALSE(error_of(std::string(kMinimal) + "strategies: [nrqed_mid]\n").empty());
  CHECK_FALSE(error_of(std::string(kMinimal) + "n_p: [4, 2]\n").empty());
  CHECK_FALSE(error_of("scenario: ring_density\nmatter:\n  model: atom\nlambda: [0.1]\n").empty());
  CHECK_FALSE(error_of("{{{").empty());
  CHECK_THROWS_AS(load_config("/nonexistent/config.yaml"), ConfigError);
}

TEST_CASE("resolved configuration round-trips") {
  const RunConfig cfg = parse_config(kMinimal);
  const std::string json = resolved_config_json(cfg);
  const RunConfig again = parse_config(json);
  CHECK(resolved_config_json(again) == json);
  CHECK(config_hash(again) == config_hash(cfg));
}

TEST_CASE("hash ignores output location, threads and log level only") {
  const RunConfig base = parse_config(kMinimal);
  RunConfig moved = base;
  moved.output_dir = "/tmp/elsewhere";
  moved.threads = 7;
  moved.log_level = LogLevel::debug;
  CHECK(config_hash(moved) == config_hash(base));
  RunConfig changed = base;
  changed.scenario.lambdas.push_back(0.1);
  CHECK(config_hash(changed) != config_hash(base));
  RunConfig solver = base;
  solver.scenario.solver.tol = 1e-12;
  CHECK(config_hash(solver) != config_hash(base));
  CHECK(config_hash(base).size() == 16);
}
