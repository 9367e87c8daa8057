#include "pflab/matter.hpp"

#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "pflab/error.hpp"
#include "pflab/units.hpp"

namespace pflab {

namespace {

SparseMatrix diagonal(const Vector& d) {
  SparseMatrix m(d.size(), d.size());
  m.reserve(Eigen::VectorXi::Constant(d.size(), 1));
  for (Eigen::Index i = 0; i < d.size(); ++i) m.insert(i, i) = d[i];
  m.makeCompressed();
  return m;
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be positive and finite, got " + std::to_string(v));
  }
}

}  // namespace

std::vector<double> MoleculeModel::separations() const {
  std::vector<double> r(r_points);
  for (std::size_t k = 0; k < r_points; ++k) r[k] = static_cast<double>(k + 1) * r_spacing;
  return r;
}

QuantumRingModel QuantumRingModel::gaas(std::size_t n_points, double spacing_nm) {
  const double h = units::nm_to_bohr(spacing_nm);
  return QuantumRingModel{
      .grid = Grid2D{Grid1D(n_points, h), Grid1D(n_points, h)},
      .omega0 = units::mev_to_hartree(10.0),
      .well_depth_v0 = units::mev_to_hartree(200.0),
      .width_d = units::nm_to_bohr(10.0),
      .effective_mass = units::gaas_effective_mass,
  };
}

double QuantumRingModel::potential(double x, double y) const {
  const double r2 = x * x + y * y;
  return 0.5 * effective_mass * omega0 * omega0 * r2 +
         well_depth_v0 * std::exp(-r2 / (width_d * width_d));
}

MatterOperator::MatterOperator(Parts parts) : parts_(std::move(parts)) {
  const auto n = parts_.potential.size();
  if (parts_.kinetic.rows() != n || parts_.kinetic.cols() != n) {
    throw ConfigError("matter operator: kinetic/potential size mismatch");
  }
  if (parts_.dipole.empty()) throw ConfigError("matter operator: no dipole components");
  for (const auto& d : parts_.dipole) {
    if (d.size() != n) throw ConfigError("matter operator: dipole size mismatch");
  }
  if (parts_.momentum.size() != parts_.dipole.size()) {
    throw ConfigError("matter operator: one momentum operator per dipole direction required");
  }
  for (const auto& p : parts_.momentum) {
    if (p.rows() != n || p.cols() != n) throw ConfigError("matter operator: momentum size mismatch");
  }
  require_positive(parts_.mass, "mass");
  if (parts_.n_electrons < 1) throw ConfigError("matter operator: n_electrons must be >= 1");
  parts_.kinetic.makeCompressed();
}

SparseMatrix MatterOperator::hamiltonian() const {
  SparseMatrix h = parts_.kinetic + diagonal(parts_.potential);
  h.makeCompressed();
  return h;
}

Vector MatterOperator::projected_dipole(std::span<const double> lambda) const {
  if (lambda.size() != parts_.dipole.size()) {
    throw ConfigError("coupling vector has " + std::to_string(lambda.size()) +
                      " components, matter has " + std::to_string(parts_.dipole.size()));
  }
  Vector out = Vector::Zero(parts_.potential.size());
  for (std::size_t d = 0; d < lambda.size(); ++d) {
    if (lambda[d] != 0.0) out += lambda[d] * parts_.dipole[d];
  }
  return out;
}

MatterOperator build_atom(const AtomModel& model, int stencil_order) {
  require_positive(model.softening_a_en, "softening_a_en");
  require_positive(model.mass, "mass");
  if (model.nuclear_charge < 0.0) throw DomainError("nuclear_charge must be >= 0");
  const Grid1D& g = model.grid;
  auto parts = [&] {
    Vector v(g.size());
    Vector mu(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double x = g.coordinate(i);
      v[i] = -model.nuclear_charge / std::sqrt(x * x + model.softening_a_en);
      mu[i] = -x;
    }
    SparseMatrix t = (-0.5 / model.mass) * laplacian(g, stencil_order);
    return MatterOperator::Parts{
        .label = "atom",
        .kinetic = std::move(t),
        .potential = std::move(v),
        .dipole = {std::move(mu)},
        .momentum = {first_derivative(g, stencil_order)},
        .mass = model.mass,
        .n_electrons = 1,
        .layout = LineLayout{g},
    };
  }();
  return MatterOperator(std::move(parts));
}

MatterOperator build_line_particle(const Grid1D& grid, const std::function<double(double)>& v,
                                   double mass, std::string label, int stencil_order) {
  require_positive(mass, "mass");
  Vector pot(grid.size());
  Vector mu(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.coordinate(i);
    pot[i] = v(x);
    mu[i] = -x;
  }
  return MatterOperator(MatterOperator::Parts{
      .label = std::move(label),
      .kinetic = (-0.5 / mass) * laplacian(grid, stencil_order),
      .potential = std::move(pot),
      .dipole = {std::move(mu)},
      .momentum = {first_derivative(grid, stencil_order)},
      .mass = mass,
      .n_electrons = 1,
      .layout = LineLayout{grid},
  });
}

MatterOperator build_molecule_electronic(const MoleculeModel& model, double separation,
                                         int stencil_order) {
  require_positive(separation, "internuclear separation R");
  require_positive(model.softening_a_ee, "softening_a_ee");
  require_positive(model.softening_a_en, "softening_a_en");
  require_positive(model.proton_mass, "proton_mass");
  const Grid1D& g = model.electron_grid;
  const std::size_t n = g.size();
  const double mu_e = model.reduced_electron_mass();
  const double half_r = 0.5 * separation;

  std::vector<double> v1(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = g.coordinate(i);
    v1[i] = -1.0 / std::sqrt((x - half_r) * (x - half_r) + model.softening_a_en) -
            1.0 / std::sqrt((x + half_r) * (x + half_r) + model.softening_a_en);
  }

  Vector pot(n * n);
  Vector mu(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x1 = g.coordinate(i);
    for (std::size_t j = 0; j < n; ++j) {
      const double x2 = g.coordinate(j);
      const double dx = x1 - x2;
      pot[i * n + j] = v1[i] + v1[j] + 1.0 / std::sqrt(dx * dx + model.softening_a_ee) +
                       1.0 / separation;
      mu[i * n + j] = -(x1 + x2);
    }
  }

  const SparseMatrix id = identity(n);
  const SparseMatrix lap = laplacian(g, stencil_order);
  const SparseMatrix der = first_derivative(g, stencil_order);
  SparseMatrix t = (-0.5 / mu_e) * SparseMatrix(kron(lap, id) + kron(id, lap));
  SparseMatrix p = kron(der, id) + kron(id, der);
  t.makeCompressed();
  p.makeCompressed();

  return MatterOperator(MatterOperator::Parts{
      .label = "h2",
      .kinetic = std::move(t),
      .potential = std::move(pot),
      .dipole = {std::move(mu)},
      .momentum = {std::move(p)},
      .mass = mu_e,
      .n_electrons = 2,
      .layout = PairLayout{g},
  });
}

MatterOperator build_ring(const QuantumRingModel& model, int stencil_order) {
  require_positive(model.effective_mass, "effective_mass");
  require_positive(model.width_d, "width_d");
  require_positive(model.omega0, "omega0");
  const Grid1D& gx = model.grid.x;
  const Grid1D& gy = model.grid.y;
  const std::size_t nx = gx.size();
  const std::size_t ny = gy.size();

  Vector pot(nx * ny);
  Vector mux(nx * ny);
  Vector muy(nx * ny);
  for (std::size_t i = 0; i < nx; ++i) {
    const double x = gx.coordinate(i);
    for (std::size_t j = 0; j < ny; ++j) {
      const double y = gy.coordinate(j);
      pot[i * ny + j] = model.potential(x, y);
      mux[i * ny + j] = -x;
      muy[i * ny + j] = -y;
    }
  }
  const SparseMatrix idx = identity(nx);
  const SparseMatrix idy = identity(ny);
  SparseMatrix t = (-0.5 / model.effective_mass) *
                   SparseMatrix(kron(laplacian(gx, stencil_order), idy) +
                                kron(idx, laplacian(gy, stencil_order)));
  t.makeCompressed();

  return MatterOperator(MatterOperator::Parts{
      .label = "ring",
      .kinetic = std::move(t),
      .potential = std::move(pot),
      .dipole = {std::move(mux), std::move(muy)},
      .momentum = {kron(first_derivative(gx, stencil_order), idy),
                   kron(idx, first_derivative(gy, stencil_order))},
      .mass = model.effective_mass,
      .n_electrons = 1,
      .layout = PlaneLayout{model.grid},
  });
}

double nuclear_ground_energy(const MoleculeModel& model, std::span<const double> surface) {
  if (surface.size() != model.r_points) {
    throw ConfigError("surface has " + std::to_string(surface.size()) + " points, R grid has " +
                      std::to_string(model.r_points));
  }
  const Grid1D rg(model.r_points, model.r_spacing);
  Eigen::MatrixXd h = Eigen::MatrixXd((-0.5 / model.reduced_nuclear_mass()) * laplacian(rg));
  for (std::size_t k = 0; k < surface.size(); ++k) h(k, k) += surface[k];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

}  // namespace pflab
