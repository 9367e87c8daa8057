#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pflab/grid.hpp"

namespace pflab {

/// One-dimensional soft-Coulomb hydrogen: -1/2m d^2/dx^2 - Z / sqrt(x^2 + a_en).
struct AtomModel {
  Grid1D grid{3000, 0.0707};
  double softening_a_en = 2.0;
  double nuclear_charge = 1.0;
  double mass = 1.0;
};

/// One-dimensional H2 with two electrons on a shared grid and a nuclear separation grid.
struct MoleculeModel {
  Grid1D electron_grid{200, 0.35};
  /// Internuclear separations R_k = (k + 1) * r_spacing, k < r_points; excludes R = 0.
  std::size_t r_points = 90;
  double r_spacing = 0.1;
  double softening_a_ee = 2.0;
  double softening_a_en = 1.0;
  double proton_mass = 1836.0;

  /// Reduced electronic mass 2M/(2M+1).
  double reduced_electron_mass() const { return 2.0 * proton_mass / (2.0 * proton_mass + 1.0); }
  /// Reduced nuclear mass M/2.
  double reduced_nuclear_mass() const { return proton_mass / 2.0; }
  std::vector<double> separations() const;
};

/// GaAs quantum ring in a Mexican-hat potential (all fields in Hartree a.u.).
struct QuantumRingModel {
  Grid2D grid;
  double omega0;
  double well_depth_v0;
  double width_d;
  double effective_mass;

  /// Reference parameters: 10 meV, 200 meV, 10 nm, 0.067 m_e on a 127^2 grid of 0.7052 nm.
  static QuantumRingModel gaas(std::size_t n_points = 127, double spacing_nm = 0.7052);
  double potential(double x, double y) const;
};

/// How a matter state vector maps onto real-space densities.
struct LineLayout {
  Grid1D grid;
};
struct PlaneLayout {
  Grid2D grid;
};
/// Two particles on the same 1D grid, flat index i1 * n + i2.
struct PairLayout {
  Grid1D grid;
};
using DensityLayout = std::variant<LineLayout, PlaneLayout, PairLayout>;

/// Bare matter Hamiltonian with its dipole and momentum building blocks.
///
/// The kinetic part is real symmetric, potential and dipoles are real diagonal.
/// Momentum is stored as the real antisymmetric derivative D with p = -i D,
/// summed over electrons, one per spatial direction.
class MatterOperator {
 public:
  struct Parts {
    std::string label;
    SparseMatrix kinetic;
    Vector potential;
    std::vector<Vector> dipole;
    std::vector<SparseMatrix> momentum;
    double mass = 1.0;
    int n_electrons = 1;
    DensityLayout layout;
  };

  explicit MatterOperator(Parts parts);

  const std::string& label() const noexcept { return parts_.label; }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(parts_.potential.size()); }
  std::size_t spatial_dimension() const noexcept { return parts_.dipole.size(); }
  const SparseMatrix& kinetic() const noexcept { return parts_.kinetic; }
  const Vector& potential() const noexcept { return parts_.potential; }
  std::span<const Vector> dipole() const noexcept { return parts_.dipole; }
  std::span<const SparseMatrix> momentum() const noexcept { return parts_.momentum; }
  double mass() const noexcept { return parts_.mass; }
  int n_electrons() const noexcept { return parts_.n_electrons; }
  const DensityLayout& layout() const noexcept { return parts_.layout; }

  /// kinetic + diag(potential).
  SparseMatrix hamiltonian() const;
  /// lambda . mu as a diagonal, lambda.size() must equal spatial_dimension().
  Vector projected_dipole(std::span<const double> lambda) const;

 private:
  Parts parts_;
};

MatterOperator build_atom(const AtomModel& model, int stencil_order = kDefaultStencilOrder);
/// Electronic Hamiltonian at fixed separation R, including 1/R.
MatterOperator build_molecule_electronic(const MoleculeModel& model, double separation,
                                         int stencil_order = kDefaultStencilOrder);
MatterOperator build_ring(const QuantumRingModel& model, int stencil_order = kDefaultStencilOrder);

/// Single particle of charge -1 on a line in an arbitrary potential. Used for
/// oracle systems (harmonic wells, tilted atoms).
MatterOperator build_line_particle(const Grid1D& grid, const std::function<double(double)>& v,
                                   double mass = 1.0, std::string label = "line",
                                   int stencil_order = kDefaultStencilOrder);

/// Ground state of -1/(2 mu_n) d^2/dR^2 + E(R) on the molecule's R grid
/// (Dirichlet at R = 0 and beyond R_max). `surface` holds E(R_k).
double nuclear_ground_energy(const MoleculeModel& model, std::span<const double> surface);

}  // namespace pflab
