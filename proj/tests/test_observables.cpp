#include <cmath>
#include <memory>

#include "doctest.h"
#include "oracles.hpp"
#include "pflab/coupled_operator.hpp"
#include "pflab/error.hpp"
#include "pflab/observables.hpp"

using namespace pflab;

namespace {

std::shared_ptr<const MatterOperator> atom(std::size_t n = 80, double h = 0.4) {
  AtomModel m;
  m.grid = Grid1D(n, h);
  return std::make_shared<const MatterOperator>(build_atom(m));
}

SolverConfig tight() {
  SolverConfig cfg;
  cfg.tol = 1e-11;
  return cfg;
}

/// photon amplitudes (x) matter vector in the operator's basis order.
Vector product_state(const CoupledOperator& op, const std::vector<double>& photon, const Vector& matter) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(op.dimension()));
  for (std::size_t n = 0; n < photon.size(); ++n) {
    const auto s = op.basis().index_of(std::vector<int>{static_cast<int>(n)});
    REQUIRE(s != FockBasis::npos);
    v.segment(static_cast<Eigen::Index>(op.index(static_cast<std::size_t>(s), 0)),
              static_cast<Eigen::Index>(op.matter_dimension())) = photon[n] * matter;
  }
  return v;
}

Vector matter_ground(const MatterOperator& m) {
  return ground_state(SparseOperator(m.hamiltonian()), tight()).vector;
}

}  // namespace

TEST_CASE("Mandel Q: coherent state is Poissonian, a single photon is sub-Poissonian") {
  const auto a = atom();
  const PhotonBath bath = sample_continuum(0.2, 0.5, 1, 0.0);
  const auto op = assemble_length_gauge(a, bath, {TruncationScheme::per_mode, 60});
  const Vector g = matter_ground(*a);
  for (double alpha : {0.5, 1.0, 2.0}) {
    const Vector v = product_state(op, oracle::coherent_amplitudes(alpha, 60), g);
    CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(photon_number(v, op, 0) == doctest::Approx(alpha * alpha).epsilon(1e-10));
    CHECK(std::abs(*mandel_q(v, op, 0)) < 1e-10);
    CHECK(field_fluctuation(v, op, 0) == doctest::Approx(0.1 * (4.0 * alpha * alpha + 1.0)).epsilon(1e-10));
    CHECK(mean_q(v, op, 0) == doctest::Approx(2.0 * alpha / std::sqrt(0.4)).epsilon(1e-10));
  }
  const Vector one = product_state(op, {0.0, 1.0}, g);
  CHECK(photon_number(one, op, 0) == doctest::Approx(1.0));
  CHECK(*mandel_q(one, op, 0) == doctest::Approx(-1.0));
  const Vector two = product_state(op, {0.0, 0.0, 1.0}, g);
  CHECK(photon_number(two, op, 0) == doctest::Approx(2.0));
  CHECK(*mandel_q(two, op, 0) == doctest::Approx(-1.0));
}

TEST_CASE("vacuum at zero coupling") {
  const auto a = atom();
  const PhotonBath bath = sample_continuum(0.1, 0.3, 2, 0.0);
  for (Gauge g : {Gauge::length, Gauge::velocity}) {
    const auto op = g == Gauge::length ? assemble_length_gauge(a, bath, {TruncationScheme::per_mode, 4})
                                       : assemble_velocity_gauge(a, bath, {TruncationScheme::per_mode, 4});
    const GroundState gs = ground_state(op, tight());
    for (std::size_t k = 0; k < 2; ++k) {
      const ModeObservables o = mode_observables(gs.vector, op, k);
      CHECK(std::abs(o.photon_number) < 1e-20);
      CHECK_FALSE(o.mandel_q.has_value());
      CHECK(o.field_fluctuation == doctest::Approx(0.5 * bath[k].omega).epsilon(1e-12));
      CHECK(o.e_field_sq == 0.0);
    }
  }
  CHECK_FALSE(mandel_q_from_moments(1e-15, 0.0).has_value());
  CHECK(*mandel_q_from_moments(2.0, 4.0) == 0.0);
}

TEST_CASE("observables agree across gauges; the unshifted ladder does not") {
  const auto a = atom(301, 0.2);
  const PhotonBath bath = sample_continuum(0.1, 0.5, 1, 0.05);
  const FockTruncation t{TruncationScheme::per_mode, 24};
  const auto lg = assemble_length_gauge(a, bath, t);
  const auto vg = assemble_velocity_gauge(a, bath, t);
  const GroundState gl = ground_state(lg, tight());
  const GroundState gv = ground_state(vg, tight());
  const ModeObservables ol = mode_observables(gl.vector, lg, 0);
  const ModeObservables ov = mode_observables(gv.vector, vg, 0);
  CHECK(std::abs(gl.energy - gv.energy) < 1e-9);
  CHECK(std::abs(ol.photon_number - ov.photon_number) < 1e-8);
  CHECK(std::abs(*ol.mandel_q - *ov.mandel_q) < 1e-6);
  CHECK(std::abs(ol.field_fluctuation - ov.field_fluctuation) < 1e-9);
  CHECK(ol.photon_number > 0.0);

  const IncorrectObservables bad = incorrect_lg_observables(gl.vector, lg, 0);
  // The bare ladder misses the dipole displacement of the physical field.
  CHECK(bad.photon_number < 0.5 * ol.photon_number);
  CHECK_THROWS_AS(incorrect_lg_observables(gv.vector, vg, 0), UsageError);
}

TEST_CASE("unshifted-ladder error grows quadratically in the coupling") {
  const auto a = atom();
  const FockTruncation t{TruncationScheme::per_mode, 12};
  auto deviation = [&](double lambda) {
    const auto op = assemble_length_gauge(a, sample_continuum(0.1, 0.5, 1, lambda), t);
    const GroundState gs = ground_state(op, tight());
    return std::abs(incorrect_lg_observables(gs.vector, op, 0).photon_number - photon_number(gs.vector, op, 0));
  };
  const double d1 = deviation(0.01);
  const double d2 = deviation(0.02);
  CHECK(d1 > 0.0);
  CHECK(d2 / d1 == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("densities integrate to the electron count") {
  const auto a = atom();
  const PhotonBath bath = sample_continuum(0.1, 0.4, 2, 0.05);
  const auto op = assemble_length_gauge(a, bath, {TruncationScheme::total_excitation, 2});
  const GroundState gs = ground_state(op, tight());
  const Density n = electron_density(gs.vector, op);
  CHECK(n.integral() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(n.shape == std::vector<std::size_t>{80});

  MoleculeModel mol;
  mol.electron_grid = Grid1D(30, 0.5);
  const MatterOperator h2 = build_molecule_electronic(mol, 1.6);
  const Density n2 = electron_density(matter_ground(h2), h2);
  CHECK(n2.integral() == doctest::Approx(2.0).epsilon(1e-10));

  const MatterOperator ring = build_ring(QuantumRingModel::gaas(21, 3.0));
  const Density nr = electron_density(matter_ground(ring), ring);
  CHECK(nr.integral() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(nr.shape == std::vector<std::size_t>{21, 21});
}

TEST_CASE("density difference is a pseudometric") {
  const auto a = atom();
  const Vector g = matter_ground(*a);
  const auto op1 = assemble_length_gauge(a, sample_continuum(0.1, 0.4, 1, 0.05), {TruncationScheme::per_mode, 6});
  const auto op2 = assemble_length_gauge(a, sample_continuum(0.1, 0.4, 1, 0.1), {TruncationScheme::per_mode, 6});
  const Density n0 = electron_density(g, *a);
  const Density n1 = electron_density(ground_state(op1, tight()).vector, op1);
  const Density n2 = electron_density(ground_state(op2, tight()).vector, op2);
  CHECK(density_diff(n0, n0) == 0.0);
  CHECK(density_diff(n0, n1) == doctest::Approx(density_diff(n1, n0)).epsilon(1e-14));
  CHECK(density_diff(n0, n2) <= density_diff(n0, n1) + density_diff(n1, n2) + 1e-15);
  CHECK(density_diff(n0, n1) > 0.0);
  CHECK(density_diff(n0, n1) <= 2.0);
  CHECK(max_density_deviation(n0, n1) > 0.0);

  const Density other = electron_density(matter_ground(*atom(60, 0.4)), *atom(60, 0.4));
  CHECK_THROWS_AS(density_diff(n0, other), ConfigError);
  CHECK_THROWS_AS(density_anisotropy(n0), ConfigError);
}

TEST_CASE("ground state carries no current and, by parity, no dipole") {
  const auto a = atom();
  const PhotonBath bath = sample_continuum(0.1, 0.4, 2, 0.05);
  for (Gauge g : {Gauge::length, Gauge::velocity}) {
    StrategyOptions o;
    o.gauge = g;
    const auto op = assemble_strategy(a, bath, Strategy::exact, {TruncationScheme::total_excitation, 2}, o);
    const GroundState gs = ground_state(op, tight());
    CHECK(std::abs(mean_current(gs.vector, op)[0]) < 1e-12);
    CHECK(std::abs(mean_dipole(gs.vector, op)[0]) < 1e-8);
  }
}

TEST_CASE("ring anisotropy: zero for a symmetric density") {
  const MatterOperator ring = build_ring(QuantumRingModel::gaas(21, 3.0));
  SolverConfig cfg;
  cfg.tol = 1e-13;
  const Density n = electron_density(ground_state(SparseOperator(ring.hamiltonian()), cfg).vector, ring);
  CHECK(density_anisotropy(n) < 1e-9);
}

TEST_CASE("dissociation energy") {
  const std::vector<double> r{1.0, 1.5, 2.0, 2.5, 3.0, 6.0};
  const std::vector<double> e{-1.0, -1.2, -1.3, -1.25, -1.2, -1.0};
  const DissociationResult d = dissociation_energy(r, e);
  CHECK(d.dissociation_energy == doctest::Approx(0.3));
  CHECK(d.equilibrium_separation == 2.0);
  CHECK(d.minimum_energy == -1.3);
  std::vector<double> shifted = e;
  for (auto& x : shifted) x += 7.0;
  CHECK(dissociation_energy(r, shifted).dissociation_energy == doctest::Approx(0.3));

  const std::vector<double> repulsive{-1.0, -1.1, -1.2, -1.3, -1.4, -1.5};
  CHECK_THROWS_AS(dissociation_energy(r, repulsive), DomainError);
  CHECK_THROWS_AS(dissociation_energy(std::vector<double>{1.0, 2.0}, std::vector<double>{0.0, 0.0}), ConfigError);
}

TEST_CASE("usage errors") {
  const auto a = atom();
  const PhotonBath bath = sample_continuum(0.1, 0.4, 2, 0.05);
  const auto op = assemble_length_gauge(a, bath, {TruncationScheme::per_mode, 2});
  const Vector wrong = Vector::Zero(5);
  CHECK_THROWS_AS(photon_number(wrong, op, 0), UsageError);
  const GroundState gs = ground_state(op, tight());
  CHECK_THROWS_AS(photon_number(gs.vector, op, 2), UsageError);
  const MeanFieldResult mf = assemble_m_dse(a, bath);
  CHECK_THROWS_AS(photon_number(mf.ground.vector, mf.op, 0), UsageError);
}
