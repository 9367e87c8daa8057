#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pflab/coupled_operator.hpp"
#include "pflab/eigensolver.hpp"
#include "pflab/fock_basis.hpp"
#include "pflab/matter.hpp"

namespace pflab {

enum class Scale { desk, full };
enum class ScenarioKind {
  mode_occupation,
  energy_vs_modes,
  density_diff_vs_modes,
  density_diff_vs_lambda,
  h2_dissociation,
  ring_density,
  gauge_check,
};
enum class MatterKind { atom, h2, ring };
enum class BathUnits { hartree, gaas_effective };
enum class LogLevel { error, warn, info, debug };

std::string_view to_string(Scale s);
std::string_view to_string(ScenarioKind k);
std::string_view to_string(MatterKind k);
std::string_view to_string(BathUnits u);
std::string_view to_string(LogLevel l);
ScenarioKind parse_scenario_kind(std::string_view name);
Scale parse_scale(std::string_view name);
const std::vector<ScenarioKind>& all_scenarios();

inline constexpr std::uint64_t kDeskDimensionBudget = 2'000'000;
inline constexpr std::uint64_t kFullDimensionBudget = 50'000'000;

struct RingParameters {
  std::size_t n_points = 127;
  double spacing_nm = 0.7052;
  double omega0_mev = 10.0;
  double well_depth_mev = 200.0;
  double width_nm = 10.0;
  double effective_mass = 0.067;

  QuantumRingModel model() const;
};

struct MatterConfig {
  MatterKind kind = MatterKind::atom;
  AtomModel atom;
  MoleculeModel molecule;
  RingParameters ring;
  /// Separations for coupled PES scans (h2); empty means the full model R grid.
  std::vector<double> r_values;
  /// Extra bare-matter scan used for the equilibrium geometry (h2).
  std::vector<double> bare_r_values;
  /// Also solve the nuclear problem on the full R grid for the bare surface (h2).
  bool nuclear_ground_state = false;
};

struct BathConfig {
  double omega_min = 0.01;
  double omega_max = 0.5;
  std::size_t n_modes = 250;
  std::size_t polarizations = 1;
  /// Keep only the lowest modes of each polarization.
  std::optional<std::size_t> keep_lowest;
  /// Resample the kept band with this many equidistant modes.
  std::optional<std::size_t> resample;
  BathUnits units = BathUnits::hartree;
};

struct TruncationConfig {
  TruncationScheme scheme = TruncationScheme::total_excitation;
  /// Cutoff for multimode baths.
  int cutoff = 2;
  /// Cutoff when the bath has one mode per polarization (nrqed_low, nrqed_ave, N_p = 1).
  int reduced_cutoff = 8;
  bool certify = true;
  double certificate_threshold = 1e-8;
};

struct Scenario {
  ScenarioKind kind = ScenarioKind::energy_vs_modes;
  Scale scale = Scale::desk;
  MatterConfig matter;
  BathConfig bath;
  std::vector<Strategy> strategies;
  /// Coupling grid; each value applies to every polarization.
  std::vector<double> lambdas;
  /// (lambda_x, lambda_y) pairs for two-polarization systems.
  std::vector<std::array<double, 2>> lambda_pairs;
  /// Mode-count grid; empty means bath.n_modes.
  std::vector<std::size_t> n_p;
  /// Additional mode counts evaluated with m_dse only.
  std::vector<std::size_t> m_dse_extra_n_p;
  TruncationConfig truncation;
  SolverConfig solver;
  MeanFieldOptions mean_field;
  std::optional<std::uint64_t> max_dimension;

  std::uint64_t dimension_budget() const;
};

struct RunConfig {
  Scenario scenario;
  std::filesystem::path output_dir = "results";
  bool overwrite = true;
  int threads = 1;
  LogLevel log_level = LogLevel::info;
};

/// Parse structured text (YAML or JSON). Unknown keys and out-of-range values raise
/// ConfigError with the offending field path.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Checks cross-field constraints; parse_config calls it.
void validate(const RunConfig& cfg);

/// Canonical JSON of the fully resolved configuration. Feeding it back to parse_config
/// reproduces the same RunConfig.
std::string resolved_config_json(const RunConfig& cfg);

}  // namespace pflab
