#include "pflab/experiments.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <thread>

#include "pflab/error.hpp"
#include "pflab/log.hpp"

namespace pflab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string key(std::string_view quantity, Strategy s, double lambda) {
  return std::string(quantity) + "." + std::string(to_string(s)) + "@lambda=" + num(lambda);
}

std::string point_context(const Scenario& s, std::string_view detail) {
  return std::string(to_string(s.kind)) + " [" + std::string(detail) + "]";
}

std::size_t spatial_dimension_of(MatterKind k) { return k == MatterKind::ring ? 2 : 1; }

std::size_t matter_dimension_of(const MatterConfig& m) {
  switch (m.kind) {
    case MatterKind::atom:
      return m.atom.grid.size();
    case MatterKind::h2:
      return m.molecule.electron_grid.size() * m.molecule.electron_grid.size();
    case MatterKind::ring:
      return m.ring.n_points * m.ring.n_points;
  }
  return 0;
}

std::vector<std::size_t> mode_grid(const Scenario& s) {
  if (!s.n_p.empty()) return s.n_p;
  return {s.bath.n_modes};
}

AssemblyOptions assembly_options(const Scenario& s) {
  AssemblyOptions o;
  o.max_dimension = s.dimension_budget();
  return o;
}

std::shared_ptr<const CoupledOperator> assemble(std::shared_ptr<const MatterOperator> matter,
                                                const PhotonBath& reduced, const FockTruncation& trunc,
                                                Gauge gauge, Strategy tag, const AssemblyOptions& opts) {
  if (gauge == Gauge::length) {
    return std::make_shared<CoupledOperator>(assemble_length_gauge(std::move(matter), reduced, trunc, opts, tag));
  }
  return std::make_shared<CoupledOperator>(assemble_velocity_gauge(std::move(matter), reduced, trunc, opts, tag));
}

bool contains(const std::vector<Strategy>& v, Strategy s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

/// Bath sampled for every (axis point) of the scenario, used by the budget check.
struct AxisBath {
  PhotonBath bath;
  std::vector<Strategy> strategies;
};

std::vector<AxisBath> axis_baths(const Scenario& s) {
  std::vector<AxisBath> out;
  const std::size_t dim = spatial_dimension_of(s.matter.kind);
  if (s.kind == ScenarioKind::ring_density) {
    for (const auto& p : s.lambda_pairs) {
      out.push_back({build_bath(s.bath, p, std::nullopt, dim), s.strategies});
    }
    return out;
  }
  if (s.kind == ScenarioKind::gauge_check) {
    for (double l : s.lambdas) {
      const std::array<double, 1> c{l};
      out.push_back({build_bath(s.bath, c, std::nullopt, dim), {Strategy::exact}});
    }
    return out;
  }
  for (double l : s.lambdas) {
    const std::array<double, 1> c{l};
    for (std::size_t n : mode_grid(s)) {
      out.push_back({build_bath(s.bath, c, s.n_p.empty() ? std::nullopt : std::optional(n), dim), s.strategies});
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(Certificate::Status s) {
  switch (s) {
    case Certificate::Status::certified:
      return "certified";
    case Certificate::Status::provisional:
      return "provisional";
    case Certificate::Status::not_applicable:
      return "not_applicable";
  }
  return "?";
}

void ResultTable::add_row(std::vector<double> values, const Certificate& certificate, double residual) {
  if (!columns.empty() && values.size() != columns.size()) {
    throw UsageError("ResultTable::add_row: " + std::to_string(values.size()) + " values for " +
                     std::to_string(columns.size()) + " columns in table " + label);
  }
  rows.push_back(std::move(values));
  certificates.push_back(certificate);
  residuals.push_back(residual);
}

const ResultTable& ScenarioResult::table(std::string_view label) const {
  for (const auto& t : tables) {
    if (t.label == label) return t;
  }
  throw UsageError("no table labelled " + std::string(label));
}

double ScenarioResult::scalar(const std::string& k) const {
  const auto it = scalars.find(k);
  if (it == scalars.end()) throw UsageError("no scalar " + k);
  return it->second;
}

std::shared_ptr<const MatterOperator> build_matter(const MatterConfig& m, double separation) {
  switch (m.kind) {
    case MatterKind::atom:
      return std::make_shared<MatterOperator>(build_atom(m.atom));
    case MatterKind::h2:
      return std::make_shared<MatterOperator>(build_molecule_electronic(m.molecule, separation));
    case MatterKind::ring:
      return std::make_shared<MatterOperator>(build_ring(m.ring.model()));
  }
  throw UsageError("build_matter: unknown matter kind");
}

PhotonBath build_bath(const BathConfig& b, std::span<const double> lambda_per_polarization,
                      std::optional<std::size_t> n_modes, std::size_t spatial_dimension) {
  const std::size_t n = n_modes.value_or(b.n_modes);
  PhotonBath bath = sample_continuum(b.omega_min, b.omega_max, n, lambda_per_polarization, spatial_dimension);
  if (b.keep_lowest) bath = truncate_lowest(bath, *b.keep_lowest);
  if (b.resample) {
    const auto first = bath.group(bath.polarizations().front());
    const double lo = first.front().omega;
    const double hi = first.back().omega;
    if (*b.resample > 1 && !(hi > lo)) {
      throw ConfigError("bath.resample: the kept band holds a single frequency and cannot be resampled");
    }
    bath = sample_continuum(lo, hi, *b.resample, lambda_per_polarization, spatial_dimension);
  }
  if (b.units == BathUnits::gaas_effective) bath = gaas_effective_to_hartree(bath);
  return bath;
}

FockTruncation truncation_for(const TruncationConfig& t, const PhotonBath& reduced) {
  bool single = !reduced.empty();
  for (int p : reduced.polarizations()) single = single && reduced.group(p).size() == 1;
  return {t.scheme, single ? t.reduced_cutoff : t.cutoff};
}

FockTruncation reference_truncation(const FockTruncation& t) {
  return {t.scheme, t.scheme == TruncationScheme::total_excitation ? t.cutoff + 1 : 2 * t.cutoff};
}

PointSolve solve_point(std::shared_ptr<const MatterOperator> matter, const PhotonBath& bath,
                       Strategy strategy, const Scenario& s, Gauge gauge) {
  const AssemblyOptions opts = assembly_options(s);
  PointSolve out;
  out.strategy = strategy;
  out.gauge = gauge;
  if (strategy == Strategy::m_dse) {
    MeanFieldResult r = assemble_m_dse(std::move(matter), bath, s.mean_field, s.solver, opts);
    out.energy = r.ground.energy;
    out.state = std::move(r.ground);
    out.mean_field = std::move(r.state);
    out.op = std::make_shared<CoupledOperator>(std::move(r.op));
    out.certificate.status = Certificate::Status::not_applicable;
    return out;
  }
  const PhotonBath reduced = strategy_bath(bath, strategy);
  const FockTruncation trunc = truncation_for(s.truncation, reduced);
  out.op = assemble(matter, reduced, trunc, gauge, strategy, opts);
  out.state = ground_state(*out.op, s.solver);
  out.energy = out.state.energy - out.op->zero_point_energy();
  out.certificate.cutoff = trunc.cutoff;
  if (!s.truncation.certify) {
    out.certificate.status = Certificate::Status::provisional;
    return out;
  }
  const FockTruncation ref = reference_truncation(trunc);
  out.certificate.reference_cutoff = ref.cutoff;
  double e_ref = 0.0;
  {
    const auto ref_op = assemble(matter, reduced, ref, gauge, strategy, opts);
    e_ref = ground_state(*ref_op, s.solver, nullptr).energy;
  }
  out.certificate.increment = std::abs(out.state.energy - e_ref);
  out.certificate.status = out.certificate.increment <= s.truncation.certificate_threshold
                               ? Certificate::Status::certified
                               : Certificate::Status::provisional;
  return out;
}

std::uint64_t max_scenario_dimension(const Scenario& s) {
  const std::size_t nm = matter_dimension_of(s.matter);
  std::uint64_t worst = nm;
  auto consider = [&](std::size_t n_modes, const FockTruncation& t) {
    worst = std::max(worst, coupled_dimension(nm, n_modes, t));
  };
  for (const auto& ab : axis_baths(s)) {
    for (Strategy st : ab.strategies) {
      if (st == Strategy::m_dse) continue;
      const PhotonBath reduced = strategy_bath(ab.bath, st);
      const FockTruncation t = truncation_for(s.truncation, reduced);
      consider(reduced.size(), t);
      if (s.truncation.certify) consider(reduced.size(), reference_truncation(t));
    }
  }
  return worst;
}

void check_budget(const Scenario& s) {
  const std::uint64_t budget = s.dimension_budget();
  const std::uint64_t dim = max_scenario_dimension(s);
  if (dim > budget) {
    const std::string shown = dim == kSaturated ? std::string(">= 2^64") : std::to_string(dim);
    throw CapacityError(std::string(to_string(s.kind)) + " at " + std::string(to_string(s.scale)) +
                            " scale needs a composite dimension of " + shown + ", above the budget of " +
                            std::to_string(budget),
                        dim);
  }
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      omp_set_num_threads(1);
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw UsageError("fit_power_law: need >= 2 matching points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("fit_power_law: x and y must be positive");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw DomainError("fit_power_law: x values are all equal");
  const double gamma = (n * sxy - sx * sy) / denom;
  return {gamma, std::exp((sy - gamma * sx) / n)};
}

double pearson_correlation(const Vector& a, const Vector& b) {
  if (a.size() != b.size() || a.size() < 2) throw UsageError("pearson_correlation: size mismatch");
  const Vector da = a.array() - a.mean();
  const Vector db = b.array() - b.mean();
  const double na = da.norm();
  const double nb = db.norm();
  if (na == 0.0 || nb == 0.0) return kNaN;
  return da.dot(db) / (na * nb);
}

PesScan run_pes_scan(const Scenario& s, double lambda, std::span<const double> separations, int threads) {
  PesScan scan;
  scan.separations.assign(separations.begin(), separations.end());
  const std::size_t nr = separations.size();
  const std::size_t ns = s.strategies.size();
  const std::array<double, 1> c{lambda};
  const PhotonBath bath = build_bath(s.bath, c, std::nullopt, 1);
  std::vector<PointSolve> solves(nr * ns);
  parallel_for(nr * ns, threads, [&](std::size_t job) {
    const std::size_t ir = job / ns;
    const Strategy st = s.strategies[job % ns];
    try {
      auto matter = build_matter(s.matter, separations[ir]);
      PointSolve p = solve_point(matter, bath, st, s);
      p.op.reset();
      p.state.vector = Vector();
      solves[job] = std::move(p);
    } catch (const SolverError& e) {
      throw SolverError(point_context(s, "lambda=" + num(lambda) + ", R=" + num(separations[ir]) +
                                             ", " + std::string(to_string(st))) +
                            ": " + e.what(),
                        e.best_residual());
    }
  });
  for (std::size_t k = 0; k < ns; ++k) {
    const Strategy st = s.strategies[k];
    auto& e = scan.energies[st];
    auto& c2 = scan.certificates[st];
    auto& r = scan.residuals[st];
    for (std::size_t ir = 0; ir < nr; ++ir) {
      const PointSolve& p = solves[ir * ns + k];
      e.push_back(p.energy);
      c2.push_back(p.certificate);
      r.push_back(p.state.residual);
    }
    try {
      scan.dissociation[st] = dissociation_energy(separations, e);
    } catch (const DomainError& err) {
      log::warn(std::string("PES ") + std::string(to_string(st)) + " at lambda=" + num(lambda) + ": " +
                err.what());
      scan.dissociation[st] = {kNaN, kNaN, *std::min_element(e.begin(), e.end())};
    }
  }
  return scan;
}

std::vector<double> bare_surface(const Scenario& s, std::span<const double> separations, int threads) {
  std::vector<double> out(separations.size());
  parallel_for(separations.size(), threads, [&](std::size_t i) {
    auto matter = build_matter(s.matter, separations[i]);
    const SparseOperator op(matter->hamiltonian());
    out[i] = ground_state(op, s.solver).energy;
  });
  return out;
}

RingDensities run_ring_densities(const Scenario& s, double lambda_x, double lambda_y, int threads) {
  RingDensities out;
  out.lambda_x = lambda_x;
  out.lambda_y = lambda_y;
  const std::array<double, 2> c{lambda_x, lambda_y};
  const PhotonBath bath = build_bath(s.bath, c, std::nullopt, 2);
  const auto matter = build_matter(s.matter);
  std::vector<PointSolve> solves(s.strategies.size());
  std::vector<Density> densities(s.strategies.size());
  parallel_for(solves.size(), threads, [&](std::size_t k) {
    const Strategy st = s.strategies[k];
    try {
      solves[k] = solve_point(matter, bath, st, s);
    } catch (const SolverError& e) {
      throw SolverError(point_context(s, "lambda=(" + num(lambda_x) + ", " + num(lambda_y) + "), " +
                                             std::string(to_string(st))) +
                            ": " + e.what(),
                        e.best_residual());
    }
    densities[k] = electron_density(solves[k].state.vector, *solves[k].op);
  });
  for (std::size_t k = 0; k < solves.size(); ++k) {
    const Strategy st = s.strategies[k];
    out.densities[st] = densities[k];
    out.anisotropy[st] = density_anisotropy(densities[k]);
    solves[k].op.reset();
    solves[k].state.vector = Vector();
    out.solves[st] = std::move(solves[k]);
  }
  const Density& exact = out.densities.at(Strategy::exact);
  for (Strategy st : s.strategies) {
    if (st == Strategy::exact) continue;
    const Density& n = out.densities.at(st);
    Density dev = n;
    dev.values = n.values - exact.values;
    out.max_deviation[st] = max_density_deviation(n, exact);
    out.delta_n[st] = density_diff(n, exact);
    out.deviations[st] = std::move(dev);
  }
  if (out.deviations.count(Strategy::m_dse)) {
    const Vector& ref = out.deviations.at(Strategy::m_dse).values;
    for (const auto& [st, dev] : out.deviations) {
      if (st == Strategy::m_dse) continue;
      out.correlation_with_m_dse[st] = pearson_correlation(dev.values, ref);
    }
  }
  return out;
}

namespace {

struct Job {
  double lambda = 0.0;
  std::size_t n_p = 0;
  Strategy strategy = Strategy::exact;
};

std::vector<Job> sweep_jobs(const Scenario& s, bool with_extras) {
  std::vector<Job> jobs;
  for (double l : s.lambdas) {
    for (std::size_t n : mode_grid(s)) {
      for (Strategy st : s.strategies) jobs.push_back({l, n, st});
    }
    if (with_extras && contains(s.strategies, Strategy::m_dse)) {
      for (std::size_t n : s.m_dse_extra_n_p) jobs.push_back({l, n, Strategy::m_dse});
    }
  }
  return jobs;
}

template <class Extract>
auto run_jobs(const Scenario& s, const std::vector<Job>& jobs, int threads, Extract extract) {
  using Out = decltype(extract(std::declval<const Job&>(), std::declval<PointSolve&>()));
  std::vector<Out> out(jobs.size());
  const auto matter = build_matter(s.matter);
  parallel_for(jobs.size(), threads, [&](std::size_t i) {
    const Job& j = jobs[i];
    const std::array<double, 1> c{j.lambda};
    const PhotonBath bath = build_bath(s.bath, c, s.n_p.empty() ? std::nullopt : std::optional(j.n_p), 1);
    try {
      PointSolve p = solve_point(matter, bath, j.strategy, s);
      log::debug(std::string(to_string(j.strategy)) + " lambda=" + num(j.lambda) + " N_p=" +
                 std::to_string(j.n_p) + " E=" + num(p.energy));
      out[i] = extract(j, p);
    } catch (const SolverError& e) {
      throw SolverError(point_context(s, "lambda=" + num(j.lambda) + ", N_p=" + std::to_string(j.n_p) +
                                             ", " + std::string(to_string(j.strategy))) +
                            ": " + e.what(),
                        e.best_residual());
    } catch (const IterationError& e) {
      throw IterationError(point_context(s, "lambda=" + num(j.lambda) + ", N_p=" + std::to_string(j.n_p)) +
                               ": " + e.what(),
                           e.residual_history());
    }
  });
  return out;
}

ResultTable& table_for(ScenarioResult& r, std::string label, std::vector<std::string> columns) {
  for (auto& t : r.tables) {
    if (t.label == label) return t;
  }
  ResultTable t;
  t.label = std::move(label);
  t.columns = std::move(columns);
  r.tables.push_back(std::move(t));
  return r.tables.back();
}

std::vector<std::string> observable_columns(std::vector<std::string> head) {
  for (const char* c : {"photon_number", "mandel_q", "e_field_sq", "field_fluctuation"}) head.emplace_back(c);
  return head;
}

void run_mode_occupation(const RunConfig& cfg, ScenarioResult& r) {
  const Scenario& s = cfg.scenario;
  struct Row {
    double energy = 0;
    Certificate cert;
    double residual = 0;
    std::vector<ModeObservables> modes;
  };
  const auto jobs = sweep_jobs(s, false);
  const auto rows = run_jobs(s, jobs, cfg.threads, [](const Job&, PointSolve& p) {
    Row row{p.energy, p.certificate, p.state.residual, {}};
    if (p.strategy != Strategy::m_dse) {
      for (std::size_t m = 0; m < p.op->bath().size(); ++m) {
        row.modes.push_back(mode_observables(p.state.vector, *p.op, m));
      }
    }
    return row;
  });
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (jobs[i].strategy == Strategy::m_dse) continue;
    auto& t = table_for(r, std::string(to_string(jobs[i].strategy)),
                        observable_columns({"lambda", "n_p", "mode", "omega", "energy"}));
    for (std::size_t m = 0; m < rows[i].modes.size(); ++m) {
      const auto& o = rows[i].modes[m];
      t.add_row({jobs[i].lambda, static_cast<double>(jobs[i].n_p), static_cast<double>(m), o.omega,
                 rows[i].energy, o.photon_number, o.mandel_q.value_or(kNaN), o.e_field_sq,
                 o.field_fluctuation},
                rows[i].cert, rows[i].residual);
    }
  }
}

void run_energy_vs_modes(const RunConfig& cfg, ScenarioResult& r) {
  const Scenario& s = cfg.scenario;
  const auto matter = build_matter(s.matter);
  const double bare = ground_state(SparseOperator(matter->hamiltonian()), s.solver).energy;
  r.scalars["bare_energy"] = bare;
  struct Row {
    double energy = 0;
    Certificate cert;
    double residual = 0;
  };
  const auto jobs = sweep_jobs(s, true);
  const auto rows = run_jobs(s, jobs, cfg.threads, [](const Job&, PointSolve& p) {
    return Row{p.energy, p.certificate, p.state.residual};
  });
  std::map<std::pair<Strategy, double>, std::vector<std::pair<double, double>>> curves;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    auto& t = table_for(r, std::string(to_string(jobs[i].strategy)), {"lambda", "n_p", "energy", "energy_shift"});
    const double shift = rows[i].energy - bare;
    t.add_row({jobs[i].lambda, static_cast<double>(jobs[i].n_p), rows[i].energy, shift}, rows[i].cert,
              rows[i].residual);
    curves[{jobs[i].strategy, jobs[i].lambda}].push_back({static_cast<double>(jobs[i].n_p), shift});
  }
  const auto grid = mode_grid(s);
  for (const auto& [k, pts] : curves) {
    const auto [st, lambda] = k;
    if (lambda <= 0.0) continue;
    std::vector<double> x, y, xa, ya;
    for (const auto& [n, e] : pts) {
      if (std::find(grid.begin(), grid.end(), static_cast<std::size_t>(n)) != grid.end()) {
        x.push_back(n);
        y.push_back(e);
      }
      xa.push_back(n);
      ya.push_back(e);
    }
    if (x.size() >= 2) {
      try {
        const PowerLawFit f = fit_power_law(x, y);
        r.scalars[key("gamma", st, lambda)] = f.exponent;
        r.scalars[key("prefactor", st, lambda)] = f.prefactor;
      } catch (const DomainError& e) {
        log::warn(key("gamma", st, lambda) + ": " + e.what());
        r.scalars[key("gamma", st, lambda)] = kNaN;
      }
    }
    if (st == Strategy::m_dse && xa.size() > x.size()) {
      r.scalars[key("gamma_extended", st, lambda)] = fit_power_law(xa, ya).exponent;
    }
    if (st == Strategy::m_dse && !xa.empty()) {
      double mean = 0.0;
      for (std::size_t i = 0; i < xa.size(); ++i) mean += ya[i] / xa[i];
      mean /= static_cast<double>(xa.size());
      double worst = 0.0;
      for (std::size_t i = 0; i < xa.size(); ++i) worst = std::max(worst, std::abs(ya[i] / xa[i] - mean));
      r.scalars[key("linearity_residual", st, lambda)] = mean != 0.0 ? worst / std::abs(mean) : 0.0;
      r.scalars[key("slope", st, lambda)] = mean;
    }
  }
}

void run_density_diff(const RunConfig& cfg, ScenarioResult& r) {
  const Scenario& s = cfg.scenario;
  struct Row {
    double energy = 0;
    Certificate cert;
    double residual = 0;
    Density density;
  };
  const auto jobs = sweep_jobs(s, false);
  const auto rows = run_jobs(s, jobs, cfg.threads, [](const Job&, PointSolve& p) {
    return Row{p.energy, p.certificate, p.state.residual, electron_density(p.state.vector, *p.op)};
  });
  const std::size_t ns = s.strategies.size();
  const std::size_t exact_pos =
      static_cast<std::size_t>(std::find(s.strategies.begin(), s.strategies.end(), Strategy::exact) -
                               s.strategies.begin());
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const Row& ref = rows[(i / ns) * ns + exact_pos];
    const double dn = density_diff(rows[i].density, ref.density);
    auto& t = table_for(r, std::string(to_string(jobs[i].strategy)), {"lambda", "n_p", "delta_n", "energy"});
    t.add_row({jobs[i].lambda, static_cast<double>(jobs[i].n_p), dn, rows[i].energy}, rows[i].cert,
              rows[i].residual);
    r.scalars[key("delta_n", jobs[i].strategy, jobs[i].lambda) + ",n_p=" + std::to_string(jobs[i].n_p)] = dn;
  }
}

void run_h2(const RunConfig& cfg, ScenarioResult& r) {
  const Scenario& s = cfg.scenario;
  const MoleculeModel& mol = s.matter.molecule;
  const std::vector<double> full_grid = mol.separations();
  if (!s.matter.bare_r_values.empty()) {
    const auto& rs = s.matter.bare_r_values;
    const auto e = bare_surface(s, rs, cfg.threads);
    auto& t = table_for(r, "bare", {"r", "energy"});
    for (std::size_t i = 0; i < rs.size(); ++i) t.add_row({rs[i], e[i]}, {}, 0.0);
    const auto it = std::min_element(e.begin(), e.end());
    r.scalars["bare.equilibrium_separation"] = rs[static_cast<std::size_t>(it - e.begin())];
    r.scalars["bare.minimum_energy"] = *it;
  }
  if (s.matter.nuclear_ground_state) {
    const auto e = bare_surface(s, full_grid, cfg.threads);
    r.scalars["bare.nuclear_ground_energy"] = nuclear_ground_energy(mol, e);
    const auto d = dissociation_energy(full_grid, e);
    r.scalars["bare.full_grid.equilibrium_separation"] = d.equilibrium_separation;
    r.scalars["bare.full_grid.dissociation_energy"] = d.dissociation_energy;
  }
  const std::vector<double>& rs = s.matter.r_values.empty() ? full_grid : s.matter.r_values;
  for (double lambda : s.lambdas) {
    const PesScan scan = run_pes_scan(s, lambda, rs, cfg.threads);
    for (Strategy st : s.strategies) {
      auto& t = table_for(r, std::string(to_string(st)), {"lambda", "r", "energy"});
      const auto& e = scan.energies.at(st);
      for (std::size_t i = 0; i < rs.size(); ++i) {
        t.add_row({lambda, rs[i], e[i]}, scan.certificates.at(st)[i], scan.residuals.at(st)[i]);
      }
      const auto& d = scan.dissociation.at(st);
      r.scalars[key("dissociation_energy", st, lambda)] = d.dissociation_energy;
      r.scalars[key("equilibrium_separation", st, lambda)] = d.equilibrium_separation;
      r.scalars[key("minimum_energy", st, lambda)] = d.minimum_energy;
    }
  }
}

void run_ring(const RunConfig& cfg, ScenarioResult& r) {
  const Scenario& s = cfg.scenario;
  for (const auto& pair : s.lambda_pairs) {
    const RingDensities d = run_ring_densities(s, pair[0], pair[1], cfg.threads);
    const std::string at = "@lambda=(" + num(pair[0]) + "," + num(pair[1]) + ")";
    for (Strategy st : s.strategies) {
      const PointSolve& p = d.solves.at(st);
      const auto get = [&](const std::map<Strategy, double>& m) {
        const auto it = m.find(st);
        return it == m.end() ? (st == Strategy::exact ? 0.0 : kNaN) : it->second;
      };
      const double corr = st == Strategy::m_dse ? 1.0 : get(d.correlation_with_m_dse);
      auto& t = table_for(r, std::string(to_string(st)),
                          {"lambda_x", "lambda_y", "energy", "max_deviation", "delta_n", "anisotropy",
                           "correlation_with_m_dse"});
      t.add_row({pair[0], pair[1], p.energy, get(d.max_deviation), get(d.delta_n), d.anisotropy.at(st), corr},
                p.certificate, p.state.residual);
      const std::string tag(to_string(st));
      r.scalars["energy." + tag + at] = p.energy;
      r.scalars["anisotropy." + tag + at] = d.anisotropy.at(st);
      if (st != Strategy::exact) {
        r.scalars["max_deviation." + tag + at] = d.max_deviation.at(st);
        r.scalars["delta_n." + tag + at] = d.delta_n.at(st);
        if (st != Strategy::m_dse && d.correlation_with_m_dse.count(st)) {
          r.scalars["correlation_with_m_dse." + tag + at] = corr;
        }
      }
      const std::string suffix = "lx" + num(pair[0]) + "_ly" + num(pair[1]);
      r.maps.push_back({tag, "density_" + suffix, d.densities.at(st)});
      if (d.deviations.count(st)) r.maps.push_back({tag, "deviation_" + suffix, d.deviations.at(st)});
    }
  }
}

void run_gauge_check(const RunConfig& cfg, ScenarioResult& r) {
  const Scenario& s = cfg.scenario;
  struct Row {
    double energy = 0;
    Certificate cert;
    double residual = 0;
    std::vector<ModeObservables> modes;
    std::vector<IncorrectObservables> incorrect;
  };
  const auto matter = build_matter(s.matter);
  const std::array<Gauge, 2> gauges{Gauge::length, Gauge::velocity};
  const std::size_t nj = s.lambdas.size() * gauges.size();
  std::vector<Row> rows(nj);
  parallel_for(nj, cfg.threads, [&](std::size_t i) {
    const double lambda = s.lambdas[i / 2];
    const Gauge g = gauges[i % 2];
    const std::array<double, 1> c{lambda};
    const PhotonBath bath = build_bath(s.bath, c, std::nullopt, 1);
    PointSolve p = solve_point(matter, bath, Strategy::exact, s, g);
    Row row{p.energy, p.certificate, p.state.residual, {}, {}};
    for (std::size_t m = 0; m < p.op->bath().size(); ++m) {
      row.modes.push_back(mode_observables(p.state.vector, *p.op, m));
      if (g == Gauge::length) row.incorrect.push_back(incorrect_lg_observables(p.state.vector, *p.op, m));
    }
    rows[i] = std::move(row);
  });
  const auto cols = observable_columns({"lambda", "mode", "omega", "energy"});
  for (const char* label : {"length", "velocity", "length_incorrect"}) table_for(r, label, cols);
  auto& lg = r.tables[r.tables.size() - 3];
  auto& vg = r.tables[r.tables.size() - 2];
  auto& bad = r.tables[r.tables.size() - 1];
  double d_e = 0, d_n = 0, d_q = 0, d_e2 = 0, d_f = 0;
  for (std::size_t il = 0; il < s.lambdas.size(); ++il) {
    const double lambda = s.lambdas[il];
    const Row& a = rows[2 * il];
    const Row& b = rows[2 * il + 1];
    d_e = std::max(d_e, std::abs(a.energy - b.energy));
    double dev_n = 0, dev_f = 0;
    for (std::size_t m = 0; m < a.modes.size(); ++m) {
      const auto& x = a.modes[m];
      const auto& y = b.modes[m];
      const auto& z = a.incorrect[m];
      lg.add_row({lambda, double(m), x.omega, a.energy, x.photon_number, x.mandel_q.value_or(kNaN), x.e_field_sq,
                  x.field_fluctuation},
                 a.cert, a.residual);
      vg.add_row({lambda, double(m), y.omega, b.energy, y.photon_number, y.mandel_q.value_or(kNaN), y.e_field_sq,
                  y.field_fluctuation},
                 b.cert, b.residual);
      bad.add_row({lambda, double(m), x.omega, a.energy, z.photon_number, z.mandel_q.value_or(kNaN), z.e_field_sq,
                   z.field_fluctuation},
                  a.cert, a.residual);
      d_n = std::max(d_n, std::abs(x.photon_number - y.photon_number));
      d_e2 = std::max(d_e2, std::abs(x.e_field_sq - y.e_field_sq));
      d_f = std::max(d_f, std::abs(x.field_fluctuation - y.field_fluctuation));
      if (x.mandel_q.has_value() != y.mandel_q.has_value()) {
        d_q = std::numeric_limits<double>::infinity();
      } else if (x.mandel_q) {
        d_q = std::max(d_q, std::abs(*x.mandel_q - *y.mandel_q));
      }
      dev_n = std::max(dev_n, std::abs(z.photon_number - x.photon_number));
      dev_f = std::max(dev_f, std::abs(z.field_fluctuation - x.field_fluctuation));
    }
    r.scalars["incorrect_deviation.photon_number@lambda=" + num(lambda)] = dev_n;
    r.scalars["incorrect_deviation.field_fluctuation@lambda=" + num(lambda)] = dev_f;
  }
  r.scalars["gauge_difference.energy"] = d_e;
  r.scalars["gauge_difference.photon_number"] = d_n;
  r.scalars["gauge_difference.mandel_q"] = d_q;
  r.scalars["gauge_difference.e_field_sq"] = d_e2;
  r.scalars["gauge_difference.field_fluctuation"] = d_f;
}

}  // namespace

ScenarioResult run_scenario(const RunConfig& cfg) {
  validate(cfg);
  const Scenario& s = cfg.scenario;
  check_budget(s);
  omp_set_num_threads(cfg.threads);
  ScenarioResult r;
  r.kind = s.kind;
  r.resolved_config = resolved_config_json(cfg);
  log::info(std::string("running ") + std::string(to_string(s.kind)) + " (" + std::string(to_string(s.scale)) +
            ", largest dimension " + std::to_string(max_scenario_dimension(s)) + ")");
  switch (s.kind) {
    case ScenarioKind::mode_occupation:
      run_mode_occupation(cfg, r);
      break;
    case ScenarioKind::energy_vs_modes:
      run_energy_vs_modes(cfg, r);
      break;
    case ScenarioKind::density_diff_vs_modes:
    case ScenarioKind::density_diff_vs_lambda:
      run_density_diff(cfg, r);
      break;
    case ScenarioKind::h2_dissociation:
      run_h2(cfg, r);
      break;
    case ScenarioKind::ring_density:
      run_ring(cfg, r);
      break;
    case ScenarioKind::gauge_check:
      run_gauge_check(cfg, r);
      break;
  }
  for (const auto& t : r.tables) {
    for (const auto& c : t.certificates) {
      if (c.status == Certificate::Status::provisional) {
        log::warn("table " + t.label + " has provisional rows (cutoff increment above threshold)");
        break;
      }
    }
  }
  return r;
}

ConvergenceTable certify_scenario(const RunConfig& cfg, std::span<const int> cutoffs) {
  validate(cfg);
  const Scenario& s = cfg.scenario;
  omp_set_num_threads(cfg.threads);
  const std::size_t dim = spatial_dimension_of(s.matter.kind);
  PhotonBath bath;
  std::shared_ptr<const MatterOperator> matter;
  if (s.kind == ScenarioKind::ring_density) {
    bath = build_bath(s.bath, s.lambda_pairs.front(), std::nullopt, dim);
    matter = build_matter(s.matter);
  } else {
    const std::array<double, 1> c{s.lambdas.back()};
    const std::optional<std::size_t> n = s.n_p.empty() ? std::nullopt : std::optional(s.n_p.back());
    bath = build_bath(s.bath, c, n, dim);
    double r = 0.0;
    if (s.matter.kind == MatterKind::h2) {
      r = s.matter.r_values.empty() ? 1.9 : s.matter.r_values.front();
    }
    matter = build_matter(s.matter, r);
  }
  const FockTruncation base = truncation_for(s.truncation, bath);
  std::vector<int> grid(cutoffs.begin(), cutoffs.end());
  if (grid.empty()) {
    if (base.scheme == TruncationScheme::total_excitation) {
      grid = {base.cutoff, base.cutoff + 1, base.cutoff + 2};
    } else {
      grid = {base.cutoff, 2 * base.cutoff};
    }
  }
  const AssemblyOptions opts = assembly_options(s);
  for (int c : grid) {
    const FockTruncation t{base.scheme, c};
    const std::uint64_t d = coupled_dimension(matter->dimension(), bath.size(), t);
    if (d > opts.max_dimension) {
      throw CapacityError("certify: cutoff " + std::to_string(c) + " needs dimension " + std::to_string(d) +
                              ", above the budget of " + std::to_string(opts.max_dimension),
                          d);
    }
  }
  OperatorFactory factory = [&](int c) -> std::unique_ptr<SymmetricOperator> {
    return std::make_unique<CoupledOperator>(assemble_length_gauge(matter, bath, {base.scheme, c}, opts));
  };
  return convergence_sweep(factory, grid, s.solver);
}

}  // namespace pflab
