#include <cmath>
#include <memory>

#include "doctest.h"
#include "oracles.hpp"
#include "pflab/coupled_operator.hpp"
#include "pflab/error.hpp"
#include "pflab/observables.hpp"

using namespace pflab;

namespace {

std::shared_ptr<const MatterOperator> small_atom(std::size_t n = 60, double h = 0.5) {
  AtomModel m;
  m.grid = Grid1D(n, h);
  return std::make_shared<MatterOperator>(build_atom(m));
}

std::shared_ptr<const MatterOperator> tilted_atom(double field, std::size_t n = 60, double h = 0.5) {
  return std::make_shared<MatterOperator>(build_line_particle(
      Grid1D(n, h), [field](double x) { return -1.0 / std::sqrt(x * x + 2.0) + field * x; }, 1.0, "tilted"));
}

SolverConfig tight() {
  SolverConfig cfg;
  cfg.tol = 1e-11;
  return cfg;
}

double bare_ground(const MatterOperator& m) { return ground_state(SparseOperator(m.hamiltonian()), tight()).energy; }

bool sparse_equal(const SparseMatrix& a, const SparseMatrix& b, double tol = 0.0) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  const SparseMatrix d = a - b;
  for (int k = 0; k < d.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(d, k); it; ++it) {
      if (std::abs(it.value()) > tol) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("zero coupling: matter ground energy plus zero-point energy in both gauges") {
  const auto atom = small_atom();
  const PhotonBath bath = sample_continuum(0.05, 0.3, 3, 0.0);
  const FockTruncation t{TruncationScheme::total_excitation, 2};
  const double e_bare = bare_ground(*atom);
  const auto lg = assemble_length_gauge(atom, bath, t);
  const auto vg = assemble_velocity_gauge(atom, bath, t);
  CHECK(ground_state(lg, tight()).energy == doctest::Approx(e_bare + bath.zero_point_energy()).epsilon(1e-11));
  CHECK(ground_state(vg, tight()).energy == doctest::Approx(e_bare + bath.zero_point_energy()).epsilon(1e-11));
  CHECK(sparse_equal(lg.to_sparse(), vg.to_sparse()));
}

TEST_CASE("harmonic matter coupled to one mode matches the normal-mode formula") {
  const double wm = 0.3;
  const double w = 0.25;
  const double lambda = 0.06;
  auto osc = std::make_shared<MatterOperator>(
      build_line_particle(Grid1D(161, 0.15), [wm](double x) { return 0.5 * wm * wm * x * x; }, 1.0, "oscillator"));
  const PhotonBath bath = sample_continuum(w, 1.0, 1, lambda);
  const double ref = oracle::coupled_oscillators_ground(wm, w, lambda);
  const FockTruncation t{TruncationScheme::per_mode, 30};
  CHECK(std::abs(ground_state(assemble_length_gauge(osc, bath, t), tight()).energy - ref) < 1e-6);
  CHECK(std::abs(ground_state(assemble_velocity_gauge(osc, bath, t), tight()).energy - ref) < 1e-6);
}

TEST_CASE("assembled operators are exactly symmetric") {
  const auto atom = small_atom();
  const auto ring = std::make_shared<MatterOperator>(build_ring(QuantumRingModel::gaas(13, 4.0)));
  const std::array<double, 2> lam{0.02, 0.01};
  const PhotonBath ring_bath = sample_continuum(0.001, 0.002, 2, lam, 2);
  const PhotonBath atom_bath = sample_continuum(0.05, 0.4, 3, 0.05);
  for (auto scheme : {TruncationScheme::per_mode, TruncationScheme::total_excitation}) {
    const FockTruncation t{scheme, 2};
    for (Gauge g : {Gauge::length, Gauge::velocity}) {
      for (Strategy s : {Strategy::exact, Strategy::nrqed_low, Strategy::nrqed_ave}) {
        StrategyOptions o;
        o.gauge = g;
        const auto a = assemble_strategy(atom, atom_bath, s, t, o);
        const auto r = assemble_strategy(ring, ring_bath, s, t, o);
        CHECK(a.structurally_symmetric());
        CHECK(r.structurally_symmetric());
        CHECK(is_exactly_symmetric(a.to_sparse()));
        CHECK(is_exactly_symmetric(r.to_sparse()));
      }
    }
  }
  const auto mf = assemble_m_dse(atom, atom_bath);
  CHECK(is_exactly_symmetric(mf.op.to_sparse()));
}

TEST_CASE("dimension, basis map and nonzero count") {
  const std::size_t n = 40;
  const auto atom = small_atom(n, 0.5);
  const PhotonBath bath = sample_continuum(0.05, 0.4, 3, 0.05);
  const FockTruncation t{TruncationScheme::total_excitation, 2};
  const auto op = assemble_length_gauge(atom, bath, t);
  CHECK(op.dimension() == n * fock_dimension(t, 3));
  CHECK(coupled_dimension(n, 3, t) == op.dimension());
  for (std::size_t k = 0; k < op.dimension(); ++k) {
    const auto [p, m] = op.split(k);
    CHECK(op.index(p, m) == k);
  }
  // Stencil band (9 points, truncated at the walls) per photon state, plus one
  // ladder entry per (pair, direction, mode, grid point).
  const std::size_t matter_nnz = 9 * n - 20;
  const std::size_t ladder = 2 * 3 * fock_ladder_pairs(t, 3) * n;
  CHECK(op.nnz() == op.photon_dimension() * matter_nnz + ladder);
}

TEST_CASE("single-mode bath: exact, nrqed_low and nrqed_ave coincide") {
  const auto atom = small_atom();
  const PhotonBath bath = sample_continuum(0.01, 0.5, 1, 0.05);
  const FockTruncation t{TruncationScheme::per_mode, 6};
  const auto e = assemble_strategy(atom, bath, Strategy::exact, t).to_sparse();
  CHECK(sparse_equal(e, assemble_strategy(atom, bath, Strategy::nrqed_low, t).to_sparse()));
  CHECK(sparse_equal(e, assemble_strategy(atom, bath, Strategy::nrqed_ave, t).to_sparse()));
}

TEST_CASE("strategy baths over 250 modes") {
  const PhotonBath bath = sample_continuum(0.01, 0.5, 250, 0.01);
  const PhotonBath ave = strategy_bath(bath, Strategy::nrqed_ave);
  REQUIRE(ave.size() == 1);
  CHECK(std::abs(ave[0].omega - 0.255) < 5e-4);
  const PhotonBath low = strategy_bath(bath, Strategy::nrqed_low);
  REQUIRE(low.size() == 1);
  CHECK(low[0].omega == 0.01);
  CHECK(low[0].coupling[0] == 0.01);
  CHECK(strategy_bath(bath, Strategy::exact).size() == 250);
  CHECK(parse_strategy("nrqed_ave") == Strategy::nrqed_ave);
  CHECK_THROWS_AS(parse_strategy("nrqed_mid"), ConfigError);
}

TEST_CASE("matrix-free and materialized products agree") {
  const auto atom = small_atom();
  const PhotonBath bath = sample_continuum(0.05, 0.4, 3, 0.07);
  const FockTruncation t{TruncationScheme::total_excitation, 3};
  for (Gauge g : {Gauge::length, Gauge::velocity}) {
    AssemblyOptions mat;
    mat.storage = Storage::materialized;
    AssemblyOptions free;
    free.storage = Storage::matrix_free;
    const auto a = g == Gauge::length ? assemble_length_gauge(atom, bath, t, mat) : assemble_velocity_gauge(atom, bath, t, mat);
    const auto b = g == Gauge::length ? assemble_length_gauge(atom, bath, t, free) : assemble_velocity_gauge(atom, bath, t, free);
    CHECK(a.materialized());
    CHECK_FALSE(b.materialized());
    const Vector x = Vector::LinSpaced(static_cast<Eigen::Index>(a.dimension()), -1.0, 1.0);
    Vector ya, yb;
    a.apply(x, ya);
    b.apply(x, yb);
    CHECK((ya - yb).norm() < 1e-12 * ya.norm());
  }
}

TEST_CASE("budget refusal reports the dimension") {
  const auto atom = small_atom();
  const PhotonBath bath = sample_continuum(0.05, 0.4, 3, 0.05);
  const FockTruncation t{TruncationScheme::total_excitation, 2};
  AssemblyOptions o;
  o.max_dimension = 600;
  CHECK(assemble_length_gauge(atom, bath, t, o).dimension() == 600);
  o.max_dimension = 599;
  try {
    (void)assemble_length_gauge(atom, bath, t, o);
    FAIL("expected a capacity error");
  } catch (const CapacityError& e) {
    CHECK(e.dimension() == 600);
  }
}

TEST_CASE("velocity and length gauge converge together under cutoff doubling") {
  const auto atom = small_atom(80, 0.4);
  const PhotonBath bath = sample_continuum(0.1, 0.5, 1, 0.1);
  auto gap = [&](int c) {
    const FockTruncation t{TruncationScheme::per_mode, c};
    return std::abs(ground_state(assemble_length_gauge(atom, bath, t), tight()).energy -
                    ground_state(assemble_velocity_gauge(atom, bath, t), tight()).energy);
  };
  const double g4 = gap(4);
  const double g8 = gap(8);
  CHECK(g8 < g4);
  CHECK(gap(16) < 1e-6);
}

TEST_CASE("mean field on a parity-symmetric atom converges at once") {
  const auto atom = small_atom();
  const PhotonBath bath = sample_continuum(0.01, 0.5, 4, 0.05);
  const MeanFieldResult r = assemble_m_dse(atom, bath, {}, tight());
  CHECK(r.state.iteration_count == 1);
  CHECK(std::abs(r.state.mean_dipole[0]) < 1e-10);
  CHECK(r.op.photon_dimension() == 1);
  CHECK(r.op.dimension() == atom->dimension());
  // H = H_M + 1/2 sum (lambda . mu)^2 when <mu> = 0
  Vector shift = Vector::Zero(static_cast<Eigen::Index>(atom->dimension()));
  for (const auto& m : bath.modes()) shift += 0.5 * atom->projected_dipole(m.coupling).cwiseAbs2();
  SparseMatrix ref = atom->hamiltonian();
  for (Eigen::Index i = 0; i < ref.rows(); ++i) ref.coeffRef(i, i) += shift[i];
  CHECK(sparse_equal(r.op.to_sparse(), ref, 1e-15));
}

TEST_CASE("mean-field operator is affine in the number of modes") {
  const auto atom = small_atom();
  const SparseMatrix hm = atom->hamiltonian();
  const std::array<double, 1> zero{0.0};
  const SparseMatrix one = SparseMatrix(assemble_dse_at(atom, sample_continuum(0.01, 0.5, 1, 0.03), zero).to_sparse() - hm);
  for (std::size_t n : {2u, 7u, 250u}) {
    const SparseMatrix dse = SparseMatrix(assemble_dse_at(atom, sample_continuum(0.01, 0.5, n, 0.03), zero).to_sparse() - hm);
    CHECK(sparse_equal(dse, static_cast<double>(n) * one, 1e-12));
  }
}

TEST_CASE("mean field on a tilted atom is self-consistent") {
  const auto atom = tilted_atom(0.01);
  const PhotonBath bath = sample_continuum(0.01, 0.5, 4, 0.1);
  const MeanFieldResult r = assemble_m_dse(atom, bath, {}, tight());
  CHECK(r.state.iteration_count > 1);
  CHECK(r.state.residual < 1e-10);
  CHECK(std::abs(r.state.mean_dipole[0]) > 1e-3);
  const Vector prob = r.ground.vector.cwiseAbs2();
  CHECK(std::abs(prob.dot(atom->dipole()[0]) - r.state.mean_dipole[0]) < 1e-9);
  CHECK(r.state.history.back() < r.state.history.front());

  MeanFieldOptions few;
  few.max_iter = 2;
  try {
    (void)assemble_m_dse(atom, bath, few, tight());
    FAIL("expected an iteration error");
  } catch (const IterationError& e) {
    CHECK(e.residual_history().size() == 2);
  }
}

TEST_CASE("zero-field condition on a polarized atom") {
  const auto atom = tilted_atom(0.02);
  const PhotonBath bath = sample_continuum(0.1, 0.3, 2, 0.05);
  const auto op = assemble_length_gauge(atom, bath, {TruncationScheme::per_mode, 8});
  const GroundState gs = ground_state(op, tight());
  const double mu = mean_dipole(gs.vector, op)[0];
  CHECK(std::abs(mu) > 1e-2);
  for (std::size_t a = 0; a < 2; ++a) {
    const double expected = bath[a].coupling[0] * mu / bath[a].omega;
    CHECK(std::abs(mean_q(gs.vector, op, a) - expected) < 1e-9);
  }
}
