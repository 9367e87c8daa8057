#pragma once

// Unit conversions. Everything inside the library is Hartree atomic units;
// meV and nm only appear at the configuration boundary.

namespace pflab::units {

inline constexpr double hartree_in_ev = 27.2114;
inline constexpr double hartree_in_mev = hartree_in_ev * 1000.0;
inline constexpr double bohr_in_nm = 0.0529177;

// GaAs effective atomic units (m* = 0.067 m_e, kappa = 12.7).
inline constexpr double gaas_effective_mass = 0.067;
inline constexpr double gaas_dielectric_constant = 12.7;
inline constexpr double gaas_hartree_in_hartree =
    gaas_effective_mass / (gaas_dielectric_constant * gaas_dielectric_constant);
inline constexpr double gaas_bohr_in_bohr = gaas_dielectric_constant / gaas_effective_mass;

constexpr double mev_to_hartree(double mev) { return mev / hartree_in_mev; }
constexpr double hartree_to_mev(double ha) { return ha * hartree_in_mev; }
constexpr double nm_to_bohr(double nm) { return nm / bohr_in_nm; }
constexpr double bohr_to_nm(double bohr) { return bohr * bohr_in_nm; }

/// Photon frequency given in effective Hartree -> Hartree.
constexpr double gaas_energy_to_hartree(double e) { return e * gaas_hartree_in_hartree; }

/// Coupling lambda has dimension sqrt(energy)/length.
/// lambda[a.u.] = lambda[eff] * sqrt(Ha*/Ha) / (a*/a0).
double gaas_coupling_to_hartree(double lambda);

}  // namespace pflab::units
