#include "pflab/photon_bath.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pflab/error.hpp"
#include "pflab/units.hpp"

namespace pflab {

double PhotonMode::coupling_norm_sq() const {
  double s = 0.0;
  for (double c : coupling) s += c * c;
  return s;
}

std::string_view to_string(BathOrigin origin) {
  switch (origin) {
    case BathOrigin::sampled:
      return "sampled";
    case BathOrigin::truncated:
      return "truncated";
    case BathOrigin::averaged:
      return "averaged";
    case BathOrigin::explicit_list:
      return "explicit";
  }
  return "explicit";
}

PhotonBath::PhotonBath(std::vector<PhotonMode> modes, BathOrigin origin)
    : modes_(std::move(modes)), origin_(origin) {
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    const auto& m = modes_[i];
    if (!(m.omega > 0.0) || !std::isfinite(m.omega)) {
      throw DomainError("photon mode " + std::to_string(i) +
                        ": omega must be > 0 (no zero-frequency mode), got " +
                        std::to_string(m.omega));
    }
    if (m.coupling.empty() || m.coupling.size() != modes_.front().coupling.size()) {
      throw ConfigError("photon mode " + std::to_string(i) + ": inconsistent coupling vector length");
    }
    if (i == 0) continue;
    const auto& prev = modes_[i - 1];
    if (m.polarization < prev.polarization) {
      throw ConfigError("photon modes must be grouped by ascending polarization index");
    }
    if (m.polarization == prev.polarization && !(m.omega > prev.omega)) {
      throw ConfigError("photon modes of polarization " + std::to_string(m.polarization) +
                        " must have strictly ascending omega");
    }
  }
}

std::size_t PhotonBath::spatial_dimension() const noexcept {
  return modes_.empty() ? 0 : modes_.front().coupling.size();
}

std::vector<int> PhotonBath::polarizations() const {
  std::vector<int> p;
  for (const auto& m : modes_) {
    if (p.empty() || p.back() != m.polarization) p.push_back(m.polarization);
  }
  return p;
}

std::vector<PhotonMode> PhotonBath::group(int polarization) const {
  std::vector<PhotonMode> g;
  std::copy_if(modes_.begin(), modes_.end(), std::back_inserter(g),
               [&](const PhotonMode& m) { return m.polarization == polarization; });
  return g;
}

double PhotonBath::zero_point_energy() const {
  double e = 0.0;
  for (const auto& m : modes_) e += 0.5 * m.omega;
  return e;
}

double PhotonBath::coupling_norm_sq(int polarization) const {
  double s = 0.0;
  for (const auto& m : modes_) {
    if (m.polarization == polarization) s += m.coupling_norm_sq();
  }
  return s;
}

PhotonBath sample_continuum(double omega_min, double omega_max, std::size_t n_modes,
                            std::span<const double> lambda_per_polarization,
                            std::size_t spatial_dimension) {
  if (!(omega_min > 0.0)) {
    throw DomainError("omega_min must be > 0 (infrared cutoff), got " + std::to_string(omega_min));
  }
  if (!(omega_max > omega_min)) throw DomainError("omega_max must exceed omega_min");
  if (n_modes == 0) throw ConfigError("n_modes must be >= 1");
  if (lambda_per_polarization.empty()) throw ConfigError("at least one polarization required");
  for (double l : lambda_per_polarization) {
    if (!(l >= 0.0) || !std::isfinite(l)) throw DomainError("coupling must be >= 0");
  }
  const std::size_t n_pol = lambda_per_polarization.size();
  const std::size_t dims = std::max(spatial_dimension, n_pol);
  const double step =
      n_modes > 1 ? (omega_max - omega_min) / static_cast<double>(n_modes - 1) : 0.0;

  std::vector<PhotonMode> modes;
  modes.reserve(n_pol * n_modes);
  for (std::size_t p = 0; p < n_pol; ++p) {
    for (std::size_t k = 0; k < n_modes; ++k) {
      PhotonMode m;
      m.omega = k + 1 == n_modes && n_modes > 1 ? omega_max
                                                 : omega_min + static_cast<double>(k) * step;
      m.coupling.assign(dims, 0.0);
      m.coupling[p] = lambda_per_polarization[p];
      m.polarization = static_cast<int>(p);
      modes.push_back(std::move(m));
    }
  }
  return PhotonBath(std::move(modes), BathOrigin::sampled);
}

PhotonBath sample_continuum(double omega_min, double omega_max, std::size_t n_modes,
                            double coupling, std::size_t polarizations) {
  std::vector<double> l(polarizations, coupling);
  return sample_continuum(omega_min, omega_max, n_modes, l, polarizations);
}

PhotonBath truncate_lowest(const PhotonBath& bath, std::size_t k_per_polarization) {
  if (k_per_polarization == 0) throw ConfigError("truncation to zero modes leaves an empty bath");
  std::vector<PhotonMode> kept;
  for (int p : bath.polarizations()) {
    auto g = bath.group(p);
    if (k_per_polarization > g.size()) {
      throw ConfigError("cannot keep " + std::to_string(k_per_polarization) +
                        " modes of polarization " + std::to_string(p) + ", it has " +
                        std::to_string(g.size()));
    }
    kept.insert(kept.end(), g.begin(), g.begin() + static_cast<std::ptrdiff_t>(k_per_polarization));
  }
  return PhotonBath(std::move(kept), BathOrigin::truncated);
}

PhotonBath average_bath(const PhotonBath& bath) {
  if (bath.empty()) throw ConfigError("cannot average an empty bath");
  std::vector<PhotonMode> out;
  for (int p : bath.polarizations()) {
    auto g = bath.group(p);
    if (g.size() == 1) {
      out.push_back(g.front());
      continue;
    }
    PhotonMode m;
    m.polarization = p;
    double w = 0.0;
    for (const auto& x : g) w += x.omega;
    m.omega = w / static_cast<double>(g.size());
    m.coupling.assign(g.front().coupling.size(), 0.0);
    for (std::size_t d = 0; d < m.coupling.size(); ++d) {
      double s = 0.0;
      double sign = 0.0;
      for (const auto& x : g) {
        s += x.coupling[d] * x.coupling[d];
        if (sign == 0.0 && x.coupling[d] != 0.0) sign = x.coupling[d] > 0.0 ? 1.0 : -1.0;
      }
      m.coupling[d] = (sign < 0.0 ? -1.0 : 1.0) * std::sqrt(s);
    }
    out.push_back(std::move(m));
  }
  return PhotonBath(std::move(out), BathOrigin::averaged);
}

PhotonBath gaas_effective_to_hartree(const PhotonBath& bath) {
  std::vector<PhotonMode> modes(bath.modes().begin(), bath.modes().end());
  for (auto& m : modes) {
    m.omega = units::gaas_energy_to_hartree(m.omega);
    for (auto& c : m.coupling) c = units::gaas_coupling_to_hartree(c);
  }
  return PhotonBath(std::move(modes), bath.origin());
}

}  // namespace pflab
