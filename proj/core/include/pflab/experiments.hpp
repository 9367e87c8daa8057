#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pflab/config.hpp"
#include "pflab/coupled_operator.hpp"
#include "pflab/observables.hpp"

namespace pflab {

/// Fock-truncation convergence evidence attached to a data point.
struct Certificate {
  enum class Status { certified, provisional, not_applicable };
  Status status = Status::not_applicable;
  int cutoff = 0;
  int reference_cutoff = 0;
  /// |E(cutoff) - E(reference_cutoff)|.
  double increment = 0.0;
};

std::string_view to_string(Certificate::Status s);

/// One output table. `label` is a strategy tag, or a gauge label for gauge_check.
struct ResultTable {
  std::string label;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<Certificate> certificates;
  std::vector<double> residuals;

  void add_row(std::vector<double> values, const Certificate& certificate, double residual);
};

struct DensityMap {
  std::string label;
  std::string name;
  Density density;
};

struct ScenarioResult {
  ScenarioKind kind = ScenarioKind::energy_vs_modes;
  std::vector<ResultTable> tables;
  std::vector<DensityMap> maps;
  std::map<std::string, double> scalars;
  std::string resolved_config;

  const ResultTable& table(std::string_view label) const;
  double scalar(const std::string& key) const;
};

/// Ground state of one strategy at one axis point.
struct PointSolve {
  Strategy strategy = Strategy::exact;
  Gauge gauge = Gauge::length;
  /// Ground energy with the photon zero-point sum removed.
  double energy = 0.0;
  GroundState state;
  std::shared_ptr<const CoupledOperator> op;
  Certificate certificate;
  std::optional<MeanFieldState> mean_field;
};

std::shared_ptr<const MatterOperator> build_matter(const MatterConfig& m, double separation = 0.0);

/// Bath for one axis point. `n_modes` overrides the configured count (mode-count sweeps).
PhotonBath build_bath(const BathConfig& b, std::span<const double> lambda_per_polarization,
                      std::optional<std::size_t> n_modes, std::size_t spatial_dimension);

/// Truncation used for a given reduced bath: the multimode cutoff, or the reduced cutoff
/// when every polarization carries a single mode.
FockTruncation truncation_for(const TruncationConfig& t, const PhotonBath& reduced);
/// Cutoff compared against for the certificate: c + 1 (total_excitation) or 2c (per_mode).
FockTruncation reference_truncation(const FockTruncation& t);

PointSolve solve_point(std::shared_ptr<const MatterOperator> matter, const PhotonBath& bath,
                       Strategy strategy, const Scenario& s, Gauge gauge = Gauge::length);

/// Largest composite dimension the scenario will assemble (certificates included).
std::uint64_t max_scenario_dimension(const Scenario& s);
/// Throws CapacityError when max_scenario_dimension exceeds the scale budget.
void check_budget(const Scenario& s);

/// Runs fn(0..n-1) on at most `threads` workers. Exceptions are rethrown in index order.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

struct PowerLawFit {
  double exponent = 0.0;
  double prefactor = 0.0;
};
/// Least-squares fit of log y = log c + gamma log x. Requires y > 0.
PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y);
double pearson_correlation(const Vector& a, const Vector& b);

struct PesScan {
  std::vector<double> separations;
  std::map<Strategy, std::vector<double>> energies;
  std::map<Strategy, std::vector<Certificate>> certificates;
  std::map<Strategy, std::vector<double>> residuals;
  std::map<Strategy, DissociationResult> dissociation;
};

/// Ground-state surfaces of every configured strategy over `separations` at coupling lambda.
PesScan run_pes_scan(const Scenario& s, double lambda, std::span<const double> separations,
                     int threads = 1);

/// Bare electronic surface (no photons) over `separations`.
std::vector<double> bare_surface(const Scenario& s, std::span<const double> separations,
                                 int threads = 1);

struct RingDensities {
  double lambda_x = 0.0;
  double lambda_y = 0.0;
  std::map<Strategy, PointSolve> solves;
  std::map<Strategy, Density> densities;
  /// Signed n - n_exact for every non-exact strategy.
  std::map<Strategy, Density> deviations;
  std::map<Strategy, double> max_deviation;
  std::map<Strategy, double> delta_n;
  std::map<Strategy, double> anisotropy;
  /// Pearson correlation between a strategy's deviation field and the m_dse one.
  std::map<Strategy, double> correlation_with_m_dse;
};

RingDensities run_ring_densities(const Scenario& s, double lambda_x, double lambda_y, int threads = 1);

ScenarioResult run_scenario(const RunConfig& cfg);

/// Cutoff sweep of the exact strategy at the scenario's first axis point.
ConvergenceTable certify_scenario(const RunConfig& cfg, std::span<const int> cutoffs = {});

}  // namespace pflab
