#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "pflab/coupled_operator.hpp"
#include "pflab/eigensolver.hpp"

namespace pflab {

/// Photon-number threshold below which Mandel Q is reported as undefined.
inline constexpr double kMinPhotonNumberForQ = 1e-14;

/// Per-mode photonic expectation values. Length-gauge operators use the shifted
/// ladder b = a - (lambda . mu) / sqrt(2 omega); velocity-gauge operators use bare a.
struct ModeObservables {
  double omega = 0.0;
  double photon_number = 0.0;
  std::optional<double> mandel_q;
  /// <E^2> including the |lambda|^2 prefactor.
  double e_field_sq = 0.0;
  /// <E^2> / |lambda|^2; equals omega / 2 in the vacuum.
  double field_fluctuation = 0.0;
  double mean_q = 0.0;
  double mean_p = 0.0;
};

/// Bare-ladder ("unshifted") operators evaluated on a length-gauge state.
struct IncorrectObservables {
  double photon_number = 0.0;
  std::optional<double> mandel_q;
  double e_field_sq = 0.0;
  double field_fluctuation = 0.0;
};

double photon_number(const Vector& state, const CoupledOperator& op, std::size_t mode);
std::optional<double> mandel_q(const Vector& state, const CoupledOperator& op, std::size_t mode);
double e_field_sq(const Vector& state, const CoupledOperator& op, std::size_t mode);
double field_fluctuation(const Vector& state, const CoupledOperator& op, std::size_t mode);
/// <q> of the mode in the length gauge. Zero-field condition: equals lambda . <mu> / omega.
double mean_q(const Vector& state, const CoupledOperator& op, std::size_t mode);
ModeObservables mode_observables(const Vector& state, const CoupledOperator& op, std::size_t mode);
IncorrectObservables incorrect_lg_observables(const Vector& state, const CoupledOperator& op,
                                              std::size_t mode);

/// Mandel Q from <n> and <a^dag^2 a^2>; nullopt when n is below kMinPhotonNumberForQ.
std::optional<double> mandel_q_from_moments(double n, double second_factorial);

/// Real-space density on the matter grid, row-major.
struct Density {
  std::vector<std::size_t> shape;
  std::vector<double> spacing;
  /// Coordinate of the first node along each axis.
  std::vector<double> origin;
  Vector values;

  double cell_volume() const;
  double integral() const;
};

/// Photon occupations traced out; for two-electron pair layouts the partner coordinate is
/// traced out as well and the result sums both electrons. Integrates to N_e.
Density electron_density(const Vector& state, const CoupledOperator& op);
Density electron_density(const Vector& matter_state, const MatterOperator& matter);

/// Integral of |n - n_ref|. Throws ConfigError on grid mismatch.
double density_diff(const Density& n, const Density& n_ref);
/// Integral of |n(x, y) - n(y, x)| for square plane densities.
double density_anisotropy(const Density& n);
/// Max |n - n_ref| over the grid.
double max_density_deviation(const Density& n, const Density& n_ref);

std::vector<double> mean_dipole(const Vector& state, const CoupledOperator& op);
/// Gauge-correct mean current per direction.
std::vector<double> mean_current(const Vector& state, const CoupledOperator& op);

struct DissociationResult {
  double dissociation_energy = 0.0;
  double equilibrium_separation = 0.0;
  double minimum_energy = 0.0;
};

/// D_e = E(R_max) - min E. Throws DomainError when the minimum is not interior.
DissociationResult dissociation_energy(std::span<const double> separations,
                                       std::span<const double> energies);

struct ObservableReport {
  std::vector<ModeObservables> per_mode;
  Density density;
  std::vector<double> mean_dipole;
  std::vector<double> mean_current;
  double total_energy = 0.0;
  std::optional<double> delta_n;
  std::optional<double> dissociation_energy;
};

ObservableReport make_report(const GroundState& gs, const CoupledOperator& op);

}  // namespace pflab
