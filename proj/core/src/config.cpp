#include "pflab/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include "pflab/error.hpp"
#include "pflab/units.hpp"

namespace pflab {

namespace {

template <typename E, std::size_t N>
E parse_enum(std::string_view name, const std::array<E, N>& values, std::string_view what) {
  for (E v : values) {
    if (to_string(v) == name) return v;
  }
  std::string allowed;
  for (E v : values) allowed += (allowed.empty() ? "" : ", ") + std::string(to_string(v));
  throw ConfigError(std::string(what) + ": unknown value '" + std::string(name) + "' (expected one of " +
                    allowed + ")");
}

constexpr std::array kScenarios{ScenarioKind::mode_occupation,       ScenarioKind::energy_vs_modes,
                                ScenarioKind::density_diff_vs_modes, ScenarioKind::density_diff_vs_lambda,
                                ScenarioKind::h2_dissociation,       ScenarioKind::ring_density,
                                ScenarioKind::gauge_check};

// ---- YAML access with field paths ----

class Node {
 public:
  Node(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  bool has(const std::string& key) const { return node_[key] && !node_[key].IsNull(); }

  Node child(const std::string& key) const {
    return Node(node_[key], path_.empty() ? key : path_ + "." + key);
  }

  void require_map() const {
    if (!node_.IsMap()) throw ConfigError(label() + ": expected a mapping");
  }

  void allow_only(std::initializer_list<std::string_view> keys) const {
    require_map();
    for (const auto& kv : node_) {
      const auto k = kv.first.as<std::string>();
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
        std::string allowed;
        for (auto a : keys) allowed += (allowed.empty() ? "" : ", ") + std::string(a);
        throw ConfigError((path_.empty() ? k : path_ + "." + k) + ": unknown key (allowed: " +
                          allowed + ")");
      }
    }
  }

  double as_double() const {
    try {
      const double v = node_.as<double>();
      if (!std::isfinite(v)) throw ConfigError(label() + ": must be finite");
      return v;
    } catch (const YAML::Exception&) {
      throw ConfigError(label() + ": expected a number");
    }
  }

  long long as_int() const {
    try {
      return node_.as<long long>();
    } catch (const YAML::Exception&) {
      throw ConfigError(label() + ": expected an integer");
    }
  }

  bool as_bool() const {
    try {
      return node_.as<bool>();
    } catch (const YAML::Exception&) {
      throw ConfigError(label() + ": expected true or false");
    }
  }

  std::string as_string() const {
    if (!node_.IsScalar()) throw ConfigError(label() + ": expected a string");
    return node_.as<std::string>();
  }

  std::vector<Node> items() const {
    if (!node_.IsSequence()) throw ConfigError(label() + ": expected a list");
    std::vector<Node> out;
    for (std::size_t i = 0; i < node_.size(); ++i) {
      out.emplace_back(node_[i], path_ + "[" + std::to_string(i) + "]");
    }
    return out;
  }

  std::size_t as_size(long long min_value) const {
    const long long v = as_int();
    if (v < min_value) throw ConfigError(label() + ": must be >= " + std::to_string(min_value));
    return static_cast<std::size_t>(v);
  }

  std::string label() const { return path_.empty() ? "<root>" : path_; }

 private:
  YAML::Node node_;
  std::string path_;
};

double positive(const Node& n, const char* hint = nullptr) {
  const double v = n.as_double();
  if (!(v > 0.0)) {
    throw ConfigError(n.label() + ": must be > 0" + (hint ? std::string(" (") + hint + ")" : "") +
                      ", got " + std::to_string(v));
  }
  return v;
}

double coupling_value(const Node& n) {
  const double v = n.as_double();
  if (v < 0.0) {
    throw ConfigError(n.label() + ": coupling must be >= 0 (valid range [0, 0.1] in these models), got " +
                      std::to_string(v));
  }
  return v;
}

Grid1D grid_from(const Node& parent, std::size_t n_default, double h_default, const char* spacing_key) {
  std::size_t n = n_default;
  double h = h_default;
  if (parent.has("n_points")) {
    n = parent.child("n_points").as_size(0);
    if (n < kMinGridPoints) {
      throw ConfigError(parent.child("n_points").label() + ": at least " +
                        std::to_string(kMinGridPoints) + " grid points are needed by the stencil");
    }
  }
  if (parent.has(spacing_key)) h = positive(parent.child(spacing_key));
  return Grid1D(n, h);
}

MatterConfig parse_matter(const Node& m) {
  m.require_map();
  MatterConfig out;
  if (!m.has("model")) throw ConfigError(m.label() + ".model: required (atom, h2 or ring)");
  const std::string model = m.child("model").as_string();
  if (model == "atom") {
    m.allow_only({"model", "n_points", "spacing", "softening_a_en", "nuclear_charge", "mass"});
    out.kind = MatterKind::atom;
    AtomModel a;
    a.grid = grid_from(m, a.grid.size(), a.grid.spacing(), "spacing");
    if (m.has("softening_a_en")) a.softening_a_en = positive(m.child("softening_a_en"));
    if (m.has("nuclear_charge")) {
      a.nuclear_charge = m.child("nuclear_charge").as_double();
      if (a.nuclear_charge < 0.0) throw ConfigError(m.label() + ".nuclear_charge: must be >= 0");
    }
    if (m.has("mass")) a.mass = positive(m.child("mass"));
    out.atom = a;
  } else if (model == "h2") {
    m.allow_only({"model", "n_points", "spacing", "softening_a_ee", "softening_a_en", "proton_mass",
                  "r_points", "r_spacing", "r_values", "bare_r_values", "nuclear_ground_state"});
    out.kind = MatterKind::h2;
    MoleculeModel mol;
    mol.electron_grid = grid_from(m, mol.electron_grid.size(), mol.electron_grid.spacing(), "spacing");
    if (m.has("softening_a_ee")) mol.softening_a_ee = positive(m.child("softening_a_ee"));
    if (m.has("softening_a_en")) mol.softening_a_en = positive(m.child("softening_a_en"));
    if (m.has("proton_mass")) mol.proton_mass = positive(m.child("proton_mass"));
    if (m.has("r_points")) mol.r_points = m.child("r_points").as_size(3);
    if (m.has("r_spacing")) mol.r_spacing = positive(m.child("r_spacing"));
    out.molecule = mol;
    for (const char* key : {"r_values", "bare_r_values"}) {
      if (!m.has(key)) continue;
      auto& dst = std::string_view(key) == "r_values" ? out.r_values : out.bare_r_values;
      for (const auto& item : m.child(key).items()) {
        dst.push_back(positive(item, "R = 0 is excluded by the 1/R repulsion"));
      }
      if (!std::is_sorted(dst.begin(), dst.end()) ||
          std::adjacent_find(dst.begin(), dst.end()) != dst.end()) {
        throw ConfigError(m.child(key).label() + ": separations must be strictly ascending");
      }
    }
    if (m.has("nuclear_ground_state")) out.nuclear_ground_state = m.child("nuclear_ground_state").as_bool();
  } else if (model == "ring") {
    m.allow_only({"model", "n_points", "spacing_nm", "omega0_meV", "well_depth_meV", "width_nm",
                  "effective_mass"});
    out.kind = MatterKind::ring;
    RingParameters r;
    if (m.has("n_points")) {
      r.n_points = m.child("n_points").as_size(static_cast<long long>(kMinGridPoints));
    }
    if (m.has("spacing_nm")) r.spacing_nm = positive(m.child("spacing_nm"));
    if (m.has("omega0_meV")) r.omega0_mev = positive(m.child("omega0_meV"));
    if (m.has("well_depth_meV")) {
      r.well_depth_mev = m.child("well_depth_meV").as_double();
      if (r.well_depth_mev < 0.0) throw ConfigError(m.label() + ".well_depth_meV: must be >= 0");
    }
    if (m.has("width_nm")) r.width_nm = positive(m.child("width_nm"));
    if (m.has("effective_mass")) r.effective_mass = positive(m.child("effective_mass"));
    out.ring = r;
  } else {
    throw ConfigError(m.child("model").label() + ": unknown model '" + model +
                      "' (expected atom, h2 or ring)");
  }
  return out;
}

BathConfig parse_bath(const Node& b) {
  b.allow_only({"omega_min", "omega_max", "n_modes", "polarizations", "keep_lowest", "resample", "units"});
  BathConfig out;
  if (b.has("omega_min")) {
    out.omega_min = b.child("omega_min").as_double();
    if (!(out.omega_min > 0.0)) {
      throw ConfigError(b.label() +
                        ".omega_min: must be > 0; a zero-frequency mode is excluded by the infrared "
                        "cutoff of the photon continuum (valid range: 0 < omega_min < omega_max)");
    }
  }
  if (b.has("omega_max")) out.omega_max = positive(b.child("omega_max"));
  if (!(out.omega_max > out.omega_min)) {
    throw ConfigError(b.label() + ".omega_max: must exceed omega_min");
  }
  if (b.has("n_modes")) out.n_modes = b.child("n_modes").as_size(1);
  if (b.has("polarizations")) {
    out.polarizations = b.child("polarizations").as_size(1);
    if (out.polarizations > 2) throw ConfigError(b.label() + ".polarizations: at most 2 are supported");
  }
  if (b.has("keep_lowest")) out.keep_lowest = b.child("keep_lowest").as_size(1);
  if (b.has("resample")) out.resample = b.child("resample").as_size(1);
  if (b.has("units")) {
    const auto u = b.child("units").as_string();
    out.units = parse_enum(u, std::array{BathUnits::hartree, BathUnits::gaas_effective},
                           b.child("units").label());
  }
  return out;
}

TruncationConfig parse_truncation(const Node& t) {
  t.allow_only({"scheme", "cutoff", "reduced_cutoff", "certify", "certificate_threshold"});
  TruncationConfig out;
  if (t.has("scheme")) {
    out.scheme = parse_enum(t.child("scheme").as_string(),
                            std::array{TruncationScheme::per_mode, TruncationScheme::total_excitation},
                            t.child("scheme").label());
  }
  if (t.has("cutoff")) out.cutoff = static_cast<int>(t.child("cutoff").as_size(1));
  if (t.has("reduced_cutoff")) out.reduced_cutoff = static_cast<int>(t.child("reduced_cutoff").as_size(1));
  if (t.has("certify")) out.certify = t.child("certify").as_bool();
  if (t.has("certificate_threshold")) out.certificate_threshold = positive(t.child("certificate_threshold"));
  return out;
}

SolverConfig parse_solver(const Node& s) {
  s.allow_only({"method", "tol", "max_iterations", "reorthogonalization", "seed", "krylov_dim",
                "dense_limit"});
  SolverConfig out;
  if (s.has("method")) {
    out.method = parse_enum(s.child("method").as_string(),
                            std::array{SolverMethod::lanczos, SolverMethod::dense}, s.child("method").label());
  }
  if (s.has("tol")) out.tol = positive(s.child("tol"));
  if (s.has("max_iterations")) out.max_iterations = s.child("max_iterations").as_size(1);
  if (s.has("reorthogonalization")) {
    out.reorthogonalization =
        parse_enum(s.child("reorthogonalization").as_string(),
                   std::array{Reorthogonalization::full, Reorthogonalization::selective},
                   s.child("reorthogonalization").label());
  }
  if (s.has("seed")) out.seed = static_cast<std::uint64_t>(s.child("seed").as_size(0));
  if (s.has("krylov_dim")) out.krylov_dim = s.child("krylov_dim").as_size(2);
  if (s.has("dense_limit")) out.dense_limit = s.child("dense_limit").as_size(1);
  return out;
}

MeanFieldOptions parse_mean_field(const Node& m) {
  m.allow_only({"mixing", "tol", "max_iter"});
  MeanFieldOptions out;
  if (m.has("mixing")) {
    out.mixing = m.child("mixing").as_double();
    if (!(out.mixing > 0.0 && out.mixing <= 1.0)) throw ConfigError(m.label() + ".mixing: must be in (0, 1]");
  }
  if (m.has("tol")) out.tol = positive(m.child("tol"));
  if (m.has("max_iter")) out.max_iter = static_cast<int>(m.child("max_iter").as_size(1));
  return out;
}

std::vector<Strategy> default_strategies(ScenarioKind k) {
  if (k == ScenarioKind::gauge_check || k == ScenarioKind::mode_occupation) return {Strategy::exact};
  return {Strategy::exact, Strategy::nrqed_ave, Strategy::nrqed_low, Strategy::m_dse};
}

}  // namespace

std::string_view to_string(Scale s) { return s == Scale::full ? "full" : "desk"; }

std::string_view to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::mode_occupation:
      return "mode_occupation";
    case ScenarioKind::energy_vs_modes:
      return "energy_vs_modes";
    case ScenarioKind::density_diff_vs_modes:
      return "density_diff_vs_modes";
    case ScenarioKind::density_diff_vs_lambda:
      return "density_diff_vs_lambda";
    case ScenarioKind::h2_dissociation:
      return "h2_dissociation";
    case ScenarioKind::ring_density:
      return "ring_density";
    case ScenarioKind::gauge_check:
      return "gauge_check";
  }
  return "energy_vs_modes";
}

std::string_view to_string(MatterKind k) {
  switch (k) {
    case MatterKind::atom:
      return "atom";
    case MatterKind::h2:
      return "h2";
    case MatterKind::ring:
      return "ring";
  }
  return "atom";
}

std::string_view to_string(BathUnits u) { return u == BathUnits::gaas_effective ? "gaas_effective" : "hartree"; }

std::string_view to_string(LogLevel l) {
  switch (l) {
    case LogLevel::error:
      return "error";
    case LogLevel::warn:
      return "warn";
    case LogLevel::info:
      return "info";
    case LogLevel::debug:
      return "debug";
  }
  return "info";
}

const std::vector<ScenarioKind>& all_scenarios() {
  static const std::vector<ScenarioKind> v(kScenarios.begin(), kScenarios.end());
  return v;
}

ScenarioKind parse_scenario_kind(std::string_view name) { return parse_enum(name, kScenarios, "scenario"); }

Scale parse_scale(std::string_view name) { return parse_enum(name, std::array{Scale::desk, Scale::full}, "scale"); }

QuantumRingModel RingParameters::model() const {
  const double h = units::nm_to_bohr(spacing_nm);
  return QuantumRingModel{
      .grid = Grid2D{Grid1D(n_points, h), Grid1D(n_points, h)},
      .omega0 = units::mev_to_hartree(omega0_mev),
      .well_depth_v0 = units::mev_to_hartree(well_depth_mev),
      .width_d = units::nm_to_bohr(width_nm),
      .effective_mass = effective_mass,
  };
}

std::uint64_t Scenario::dimension_budget() const {
  if (max_dimension) return *max_dimension;
  return scale == Scale::full ? kFullDimensionBudget : kDeskDimensionBudget;
}

RunConfig parse_config(std::string_view text) {
  YAML::Node root_node;
  try {
    root_node = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  }
  const Node root(root_node, "");
  root.allow_only({"scenario", "scale", "threads", "log_level", "output", "matter", "bath", "lambda",
                   "lambda_pairs", "n_p", "m_dse_extra_n_p", "strategies", "truncation", "solver",
                   "mean_field", "budget"});
  RunConfig cfg;
  Scenario& s = cfg.scenario;
  if (!root.has("scenario")) throw ConfigError("scenario: required");
  s.kind = parse_enum(root.child("scenario").as_string(), kScenarios, "scenario");
  if (root.has("scale")) s.scale = parse_scale(root.child("scale").as_string());
  if (root.has("threads")) cfg.threads = static_cast<int>(root.child("threads").as_size(1));
  if (root.has("log_level")) {
    cfg.log_level = parse_enum(root.child("log_level").as_string(),
                               std::array{LogLevel::error, LogLevel::warn, LogLevel::info, LogLevel::debug},
                               "log_level");
  }
  if (root.has("output")) {
    const Node o = root.child("output");
    o.allow_only({"dir", "overwrite"});
    if (o.has("dir")) cfg.output_dir = o.child("dir").as_string();
    if (o.has("overwrite")) cfg.overwrite = o.child("overwrite").as_bool();
  }
  if (!root.has("matter")) throw ConfigError("matter: required");
  s.matter = parse_matter(root.child("matter"));
  if (root.has("bath")) s.bath = parse_bath(root.child("bath"));
  if (root.has("lambda")) {
    const Node l = root.child("lambda");
    if (l.items().empty()) throw ConfigError("lambda: must not be empty");
    for (const auto& item : l.items()) s.lambdas.push_back(coupling_value(item));
  }
  if (root.has("lambda_pairs")) {
    for (const auto& item : root.child("lambda_pairs").items()) {
      const auto pair = item.items();
      if (pair.size() != 2) throw ConfigError(item.label() + ": expected [lambda_x, lambda_y]");
      s.lambda_pairs.push_back({coupling_value(pair[0]), coupling_value(pair[1])});
    }
  }
  for (const char* key : {"n_p", "m_dse_extra_n_p"}) {
    if (!root.has(key)) continue;
    auto& dst = std::string_view(key) == "n_p" ? s.n_p : s.m_dse_extra_n_p;
    for (const auto& item : root.child(key).items()) dst.push_back(item.as_size(1));
    if (!std::is_sorted(dst.begin(), dst.end()) || std::adjacent_find(dst.begin(), dst.end()) != dst.end()) {
      throw ConfigError(std::string(key) + ": mode counts must be strictly ascending");
    }
  }
  if (root.has("strategies")) {
    for (const auto& item : root.child("strategies").items()) {
      try {
        s.strategies.push_back(parse_strategy(item.as_string()));
      } catch (const ConfigError& e) {
        throw ConfigError(item.label() + ": " + e.what());
      }
    }
  } else {
    s.strategies = default_strategies(s.kind);
  }
  if (root.has("truncation")) s.truncation = parse_truncation(root.child("truncation"));
  if (root.has("solver")) s.solver = parse_solver(root.child("solver"));
  if (root.has("mean_field")) s.mean_field = parse_mean_field(root.child("mean_field"));
  if (root.has("budget")) {
    const Node b = root.child("budget");
    b.allow_only({"max_dimension"});
    if (b.has("max_dimension")) s.max_dimension = b.child("max_dimension").as_size(1);
  }
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read configuration file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate(const RunConfig& cfg) {
  const Scenario& s = cfg.scenario;
  if (cfg.threads < 1) throw ConfigError("threads: must be >= 1");
  s.solver.validate();
  if (s.strategies.empty()) throw ConfigError("strategies: must not be empty");
  for (std::size_t i = 0; i < s.strategies.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (s.strategies[i] == s.strategies[j]) throw ConfigError("strategies: duplicate entry");
    }
  }
  const bool ring = s.matter.kind == MatterKind::ring;
  if (s.kind == ScenarioKind::ring_density) {
    if (!ring) throw ConfigError("matter.model: ring_density needs the ring model");
    if (s.lambda_pairs.empty()) throw ConfigError("lambda_pairs: required for ring_density");
    for (const auto& p : s.lambda_pairs) {
      if (p[0] < p[1]) {
        throw ConfigError("lambda_pairs: lambda_x >= lambda_y is required (x is the stronger coupling)");
      }
    }
    if (s.bath.polarizations != 2) throw ConfigError("bath.polarizations: the ring couples to 2 polarizations");
    if (std::find(s.strategies.begin(), s.strategies.end(), Strategy::exact) == s.strategies.end()) {
      throw ConfigError("strategies: ring_density compares against exact, which must be listed");
    }
  } else {
    if (ring) throw ConfigError("matter.model: the ring model is only used by ring_density");
    if (s.lambdas.empty()) throw ConfigError("lambda: required (list of coupling strengths)");
    if (s.bath.polarizations != 1) throw ConfigError("bath.polarizations: one-dimensional systems use 1");
  }
  if (s.kind == ScenarioKind::h2_dissociation && s.matter.kind != MatterKind::h2) {
    throw ConfigError("matter.model: h2_dissociation needs the h2 model");
  }
  if (s.kind != ScenarioKind::h2_dissociation && s.matter.kind == MatterKind::h2) {
    throw ConfigError("matter.model: the h2 model is only used by h2_dissociation");
  }
  if (s.kind == ScenarioKind::density_diff_vs_modes || s.kind == ScenarioKind::density_diff_vs_lambda ||
      s.kind == ScenarioKind::h2_dissociation) {
    if (std::find(s.strategies.begin(), s.strategies.end(), Strategy::exact) == s.strategies.end()) {
      throw ConfigError("strategies: " + std::string(to_string(s.kind)) + " compares against exact");
    }
  }
  if (s.bath.keep_lowest && *s.bath.keep_lowest > s.bath.n_modes) {
    throw ConfigError("bath.keep_lowest: exceeds n_modes");
  }
  if (!s.n_p.empty() && (s.bath.keep_lowest || s.bath.resample)) {
    throw ConfigError("n_p: mode-count grids resample the continuum and cannot be combined with "
                      "bath.keep_lowest/resample");
  }
  if (s.matter.kind == MatterKind::h2) {
    const double r_max = static_cast<double>(s.matter.molecule.r_points) * s.matter.molecule.r_spacing;
    for (double r : s.matter.r_values) {
      if (r > r_max + 1e-12) throw ConfigError("matter.r_values: R outside (0, r_points * r_spacing]");
    }
  }
  if (s.truncation.scheme == TruncationScheme::per_mode && s.truncation.cutoff > 64) {
    throw ConfigError("truncation.cutoff: too large");
  }
}

std::string resolved_config_json(const RunConfig& cfg) {
  using nlohmann::json;
  const Scenario& s = cfg.scenario;
  json j;
  j["scenario"] = std::string(to_string(s.kind));
  j["scale"] = std::string(to_string(s.scale));
  j["threads"] = cfg.threads;
  j["log_level"] = std::string(to_string(cfg.log_level));
  j["output"] = {{"dir", cfg.output_dir.string()}, {"overwrite", cfg.overwrite}};

  json m;
  m["model"] = std::string(to_string(s.matter.kind));
  switch (s.matter.kind) {
    case MatterKind::atom: {
      const auto& a = s.matter.atom;
      m["n_points"] = a.grid.size();
      m["spacing"] = a.grid.spacing();
      m["softening_a_en"] = a.softening_a_en;
      m["nuclear_charge"] = a.nuclear_charge;
      m["mass"] = a.mass;
      break;
    }
    case MatterKind::h2: {
      const auto& mol = s.matter.molecule;
      m["n_points"] = mol.electron_grid.size();
      m["spacing"] = mol.electron_grid.spacing();
      m["softening_a_ee"] = mol.softening_a_ee;
      m["softening_a_en"] = mol.softening_a_en;
      m["proton_mass"] = mol.proton_mass;
      m["r_points"] = mol.r_points;
      m["r_spacing"] = mol.r_spacing;
      m["r_values"] = s.matter.r_values;
      m["bare_r_values"] = s.matter.bare_r_values;
      m["nuclear_ground_state"] = s.matter.nuclear_ground_state;
      break;
    }
    case MatterKind::ring: {
      const auto& r = s.matter.ring;
      m["n_points"] = r.n_points;
      m["spacing_nm"] = r.spacing_nm;
      m["omega0_meV"] = r.omega0_mev;
      m["well_depth_meV"] = r.well_depth_mev;
      m["width_nm"] = r.width_nm;
      m["effective_mass"] = r.effective_mass;
      break;
    }
  }
  j["matter"] = m;

  json b;
  b["omega_min"] = s.bath.omega_min;
  b["omega_max"] = s.bath.omega_max;
  b["n_modes"] = s.bath.n_modes;
  b["polarizations"] = s.bath.polarizations;
  if (s.bath.keep_lowest) b["keep_lowest"] = *s.bath.keep_lowest;
  if (s.bath.resample) b["resample"] = *s.bath.resample;
  b["units"] = std::string(to_string(s.bath.units));
  j["bath"] = b;

  if (!s.lambdas.empty()) j["lambda"] = s.lambdas;
  if (!s.lambda_pairs.empty()) {
    json pairs = json::array();
    for (const auto& p : s.lambda_pairs) pairs.push_back({p[0], p[1]});
    j["lambda_pairs"] = pairs;
  }
  if (!s.n_p.empty()) j["n_p"] = s.n_p;
  if (!s.m_dse_extra_n_p.empty()) j["m_dse_extra_n_p"] = s.m_dse_extra_n_p;
  json strategies = json::array();
  for (Strategy st : s.strategies) strategies.push_back(std::string(to_string(st)));
  j["strategies"] = strategies;
  j["truncation"] = {{"scheme", std::string(to_string(s.truncation.scheme))},
                     {"cutoff", s.truncation.cutoff},
                     {"reduced_cutoff", s.truncation.reduced_cutoff},
                     {"certify", s.truncation.certify},
                     {"certificate_threshold", s.truncation.certificate_threshold}};
  j["solver"] = {{"method", std::string(to_string(s.solver.method))},
                 {"tol", s.solver.tol},
                 {"max_iterations", s.solver.max_iterations},
                 {"reorthogonalization", std::string(to_string(s.solver.reorthogonalization))},
                 {"seed", s.solver.seed},
                 {"krylov_dim", s.solver.krylov_dim},
                 {"dense_limit", s.solver.dense_limit}};
  j["mean_field"] = {{"mixing", s.mean_field.mixing}, {"tol", s.mean_field.tol}, {"max_iter", s.mean_field.max_iter}};
  j["budget"] = {{"max_dimension", s.dimension_budget()}};
  return j.dump(2);
}

}  // namespace pflab
