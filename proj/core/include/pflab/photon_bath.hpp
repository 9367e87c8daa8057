#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace pflab {

struct PhotonMode {
  double omega = 0.0;
  /// Coupling vector lambda, one component per spatial direction of the matter system.
  std::vector<double> coupling;
  int polarization = 0;

  double coupling_norm_sq() const;
  friend bool operator==(const PhotonMode&, const PhotonMode&) = default;
};

enum class BathOrigin { sampled, truncated, averaged, explicit_list };

std::string_view to_string(BathOrigin origin);

/// Modes grouped by polarization (ascending index), strictly ascending in omega
/// inside each group. All coupling vectors have the same length.
class PhotonBath {
 public:
  PhotonBath() = default;
  PhotonBath(std::vector<PhotonMode> modes, BathOrigin origin);

  std::span<const PhotonMode> modes() const noexcept { return modes_; }
  const PhotonMode& operator[](std::size_t i) const { return modes_.at(i); }
  std::size_t size() const noexcept { return modes_.size(); }
  bool empty() const noexcept { return modes_.empty(); }
  BathOrigin origin() const noexcept { return origin_; }
  std::size_t spatial_dimension() const noexcept;

  /// Distinct polarization indices in order of appearance.
  std::vector<int> polarizations() const;
  std::vector<PhotonMode> group(int polarization) const;
  double zero_point_energy() const;
  /// sum over modes of |lambda|^2 restricted to one polarization.
  double coupling_norm_sq(int polarization) const;

  friend bool operator==(const PhotonBath&, const PhotonBath&) = default;

 private:
  std::vector<PhotonMode> modes_;
  BathOrigin origin_ = BathOrigin::explicit_list;
};

/// Endpoint-inclusive equidistant sampling of [omega_min, omega_max]; n_modes = 1
/// yields the single frequency omega_min. Polarization p couples along axis p with
/// strength lambda_per_polarization[p]; the coupling vectors have
/// max(spatial_dimension, #polarizations) components.
PhotonBath sample_continuum(double omega_min, double omega_max, std::size_t n_modes,
                            std::span<const double> lambda_per_polarization,
                            std::size_t spatial_dimension = 1);

/// Same coupling for every polarization.
PhotonBath sample_continuum(double omega_min, double omega_max, std::size_t n_modes,
                            double coupling, std::size_t polarizations = 1);

/// The k lowest-frequency modes of each polarization.
PhotonBath truncate_lowest(const PhotonBath& bath, std::size_t k_per_polarization);

/// One effective mode per polarization: mean omega and root-sum-square coupling
/// (per component). Groups with a single mode pass through unchanged.
PhotonBath average_bath(const PhotonBath& bath);

/// Frequencies and couplings given in GaAs effective units -> Hartree units.
PhotonBath gaas_effective_to_hartree(const PhotonBath& bath);

}  // namespace pflab
