#include <atomic>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "pflab/config.hpp"
#include "pflab/error.hpp"
#include "pflab/experiments.hpp"

using namespace pflab;

namespace {

RunConfig small_modes_config(int threads) {
  RunConfig cfg = parse_config(R"(
scenario: energy_vs_modes
matter:
  model: atom
  n_points: 51
  spacing: 0.6
bath:
  omega_min: 0.01
  omega_max: 0.5
lambda: [0.0, 0.02]
n_p: [1, 2, 4]
m_dse_extra_n_p: [8, 16]
strategies: [exact, nrqed_ave, nrqed_low, m_dse]
truncation:
  scheme: total_excitation
  cutoff: 2
  reduced_cutoff: 6
)");
  cfg.threads = threads;
  return cfg;
}

}  // namespace

TEST_CASE("truncation rule and certificate reference") {
  TruncationConfig t;
  t.scheme = TruncationScheme::total_excitation;
  t.cutoff = 2;
  t.reduced_cutoff = 7;
  CHECK(truncation_for(t, sample_continuum(0.01, 0.5, 1, 0.01)).cutoff == 7);
  CHECK(truncation_for(t, sample_continuum(0.01, 0.5, 1, 0.01, 2)).cutoff == 7);
  CHECK(truncation_for(t, sample_continuum(0.01, 0.5, 3, 0.01)).cutoff == 2);
  CHECK(reference_truncation({TruncationScheme::total_excitation, 3}).cutoff == 4);
  CHECK(reference_truncation({TruncationScheme::per_mode, 3}).cutoff == 6);
}

TEST_CASE("budget is checked before anything is assembled") {
  RunConfig cfg = parse_config(R"(
scenario: mode_occupation
scale: full
matter:
  model: atom
bath:
  n_modes: 250
lambda: [0.01]
truncation:
  cutoff: 2
)");
  const std::uint64_t dim = max_scenario_dimension(cfg.scenario);
  CHECK(dim == 3000ull * 2667126ull);  // 3000 grid points x C(253, 3) photon states
  try {
    check_budget(cfg.scenario);
    FAIL("expected a capacity error");
  } catch (const CapacityError& e) {
    CHECK(e.dimension() == dim);
    CHECK(std::string(e.what()).find("dimension") != std::string::npos);
  }
  cfg.scenario.matter.atom.grid = Grid1D(51, 0.6);
  cfg.scenario.bath.n_modes = 10;
  CHECK_NOTHROW(check_budget(cfg.scenario));
}

TEST_CASE("power-law fit and correlation") {
  std::vector<double> x{1, 2, 4, 8, 16};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, 0.75));
  const PowerLawFit f = fit_power_law(x, y);
  CHECK(f.exponent == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(f.prefactor == doctest::Approx(3.0).epsilon(1e-12));
  y[0] = 0.0;
  CHECK_THROWS_AS(fit_power_law(x, y), DomainError);

  Vector a(4), b(4);
  a << 1, 2, 3, 4;
  b << -2, -4, -6, -8;
  CHECK(pearson_correlation(a, b) == doctest::Approx(-1.0));
  CHECK(std::isnan(pearson_correlation(a, Vector::Ones(4))));
}

TEST_CASE("parallel_for covers every index once and rethrows the first failure") {
  std::vector<std::atomic<int>> hits(100);
  parallel_for(100, 4, [&](std::size_t i) { hits[i]++; });
  for (const auto& h : hits) CHECK(h.load() == 1);
  try {
    parallel_for(20, 3, [](std::size_t i) {
      if (i == 5 || i == 12) throw std::runtime_error("job " + std::to_string(i));
    });
    FAIL("expected a rethrow");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "job 5");
  }
}

TEST_CASE("mode-count scenario: deterministic across thread counts") {
  const ScenarioResult one = run_scenario(small_modes_config(1));
  const ScenarioResult two = run_scenario(small_modes_config(2));
  CHECK(one.scalars == two.scalars);
  REQUIRE(one.tables.size() == two.tables.size());
  for (std::size_t t = 0; t < one.tables.size(); ++t) CHECK(one.tables[t].rows == two.tables[t].rows);

  const ResultTable& m = one.table("m_dse");
  CHECK(m.rows.size() == 2 * (3 + 2));
  for (const auto& c : m.certificates) CHECK(c.status == Certificate::Status::not_applicable);
  const ResultTable& exact = one.table("exact");
  for (std::size_t i = 0; i < exact.rows.size(); ++i) {
    CHECK(exact.certificates[i].status != Certificate::Status::not_applicable);
    CHECK(exact.residuals[i] < 1e-9);
  }
  // N_p = 1: every strategy except the mean field sees the same single mode.
  const double e_exact = exact.rows[3][2];
  CHECK(exact.rows[3][0] == 0.02);
  CHECK(exact.rows[3][1] == 1.0);
  CHECK(one.table("nrqed_ave").rows[3][2] == doctest::Approx(e_exact).epsilon(1e-10));
  CHECK(one.table("nrqed_low").rows[3][2] == doctest::Approx(e_exact).epsilon(1e-10));
  // Zero coupling leaves the bare energy.
  for (const auto& t : one.tables) {
    CHECK(t.rows[0][2] == doctest::Approx(one.scalar("bare_energy")).epsilon(1e-10));
  }
  CHECK_THROWS_AS(one.table("nope"), UsageError);
}

TEST_CASE("certification sweep") {
  const RunConfig cfg = small_modes_config(1);
  const std::array<int, 3> cutoffs{1, 2, 3};
  const ConvergenceTable t = certify_scenario(cfg, cutoffs);
  REQUIRE(t.points.size() == 3);
  CHECK(t.monotone);
  CHECK(t.increment < 1e-6);
}

TEST_CASE("result tables validate row width") {
  ResultTable t;
  t.columns = {"a", "b"};
  t.add_row({1.0, 2.0}, {}, 0.0);
  CHECK_THROWS_AS(t.add_row({1.0}, {}, 0.0), UsageError);
  CHECK(to_string(Certificate::Status::provisional) == "provisional");
}
