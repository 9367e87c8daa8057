#include "pflab/output.hpp"

#include <unistd.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pflab/error.hpp"

namespace pflab {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json number(double v) {
  if (std::isfinite(v)) return v;
  return fmt(v);
}

std::string join_sizes(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "x" : "") + std::to_string(v[i]);
  return s;
}

std::string join_doubles(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt(v[i]);
  return s;
}

std::string safe(std::string s) {
  for (char& c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) c = '_';
  }
  return s;
}

}  // namespace

std::string config_hash(const RunConfig& cfg) {
  json j = json::parse(resolved_config_json(cfg));
  j.erase("output");
  j.erase("threads");
  j.erase("log_level");
  const std::string text = j.dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_atomic(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error("failed writing " + tmp.string());
    }
  }
  fs::rename(tmp, path);
}

std::string table_csv(const ResultTable& t) {
  std::ostringstream os;
  for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
  os << ",certificate,cutoff,reference_cutoff,cutoff_increment,residual\n";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    for (std::size_t c = 0; c < t.rows[r].size(); ++c) os << (c ? "," : "") << fmt(t.rows[r][c]);
    const Certificate& cert = t.certificates[r];
    os << ',' << to_string(cert.status) << ',' << cert.cutoff << ',' << cert.reference_cutoff << ','
       << fmt(cert.increment) << ',' << fmt(t.residuals[r]) << '\n';
  }
  return os.str();
}

std::string density_csv(const DensityMap& map) {
  const Density& d = map.density;
  std::ostringstream os;
  os << "# label=" << map.label << '\n'
     << "# name=" << map.name << '\n'
     << "# shape=" << join_sizes(d.shape) << '\n'
     << "# spacing=" << join_doubles(d.spacing) << '\n'
     << "# origin=" << join_doubles(d.origin) << '\n';
  const std::size_t cols = d.shape.size() >= 2 ? d.shape[1] : 1;
  const std::size_t rows = cols == 0 ? 0 : static_cast<std::size_t>(d.values.size()) / cols;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      os << (j ? "," : "") << fmt(d.values[static_cast<Eigen::Index>(i * cols + j)]);
    }
    os << '\n';
  }
  return os.str();
}

std::string sidecar_json(const ScenarioResult& result, const RunConfig& cfg, const std::vector<fs::path>& files) {
  json j;
  j["scenario"] = std::string(to_string(result.kind));
  j["config_hash"] = config_hash(cfg);
  j["config"] = json::parse(result.resolved_config.empty() ? resolved_config_json(cfg) : result.resolved_config);
  json scalars = json::object();
  for (const auto& [k, v] : result.scalars) scalars[k] = number(v);
  j["scalars"] = scalars;
  json tables = json::array();
  for (const auto& t : result.tables) {
    std::size_t certified = 0, provisional = 0, na = 0;
    double worst_residual = 0.0, worst_increment = 0.0;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      switch (t.certificates[r].status) {
        case Certificate::Status::certified:
          ++certified;
          break;
        case Certificate::Status::provisional:
          ++provisional;
          break;
        case Certificate::Status::not_applicable:
          ++na;
          break;
      }
      worst_residual = std::max(worst_residual, t.residuals[r]);
      worst_increment = std::max(worst_increment, t.certificates[r].increment);
    }
    tables.push_back({{"label", t.label},
                      {"columns", t.columns},
                      {"rows", t.rows.size()},
                      {"certified_rows", certified},
                      {"provisional_rows", provisional},
                      {"uncertifiable_rows", na},
                      {"max_residual", number(worst_residual)},
                      {"max_cutoff_increment", number(worst_increment)}});
  }
  j["tables"] = tables;
  json maps = json::array();
  for (const auto& m : result.maps) {
    maps.push_back({{"label", m.label}, {"name", m.name}, {"shape", m.density.shape}});
  }
  j["maps"] = maps;
  json names = json::array();
  for (const auto& f : files) names.push_back(f.filename().string());
  j["files"] = names;
  return j.dump(2) + "\n";
}

std::string report_json(const ObservableReport& report) {
  json modes = json::array();
  for (const auto& m : report.per_mode) {
    modes.push_back({{"omega", m.omega},
                     {"photon_number", m.photon_number},
                     {"mandel_q", m.mandel_q ? json(*m.mandel_q) : json(nullptr)},
                     {"e_field_sq", m.e_field_sq},
                     {"field_fluctuation", m.field_fluctuation},
                     {"mean_q", m.mean_q},
                     {"mean_p", m.mean_p}});
  }
  json j;
  j["total_energy"] = report.total_energy;
  j["modes"] = modes;
  j["mean_dipole"] = report.mean_dipole;
  j["mean_current"] = report.mean_current;
  j["density_integral"] = report.density.integral();
  j["delta_n"] = report.delta_n ? json(*report.delta_n) : json(nullptr);
  j["dissociation_energy"] = report.dissociation_energy ? json(*report.dissociation_energy) : json(nullptr);
  return j.dump(2) + "\n";
}

std::vector<fs::path> write_result(const ScenarioResult& result, const RunConfig& cfg) {
  const std::string hash = config_hash(cfg);
  const std::string scenario(to_string(result.kind));
  std::vector<std::pair<fs::path, std::string>> outputs;
  for (const auto& t : result.tables) {
    outputs.emplace_back(cfg.output_dir / (scenario + "__" + safe(t.label) + "__" + hash + ".csv"), table_csv(t));
  }
  for (const auto& m : result.maps) {
    outputs.emplace_back(cfg.output_dir / (scenario + "__" + safe(m.label) + "__" + safe(m.name) + "__" + hash + ".csv"),
                         density_csv(m));
  }
  std::vector<fs::path> paths;
  for (const auto& o : outputs) paths.push_back(o.first);
  const fs::path sidecar = cfg.output_dir / (scenario + "__" + hash + ".json");
  paths.push_back(sidecar);
  if (!cfg.overwrite) {
    for (const auto& p : paths) {
      if (fs::exists(p)) throw ConfigError("output.overwrite: " + p.string() + " exists and overwriting is disabled");
    }
  }
  for (const auto& [p, text] : outputs) write_atomic(p, text);
  write_atomic(sidecar, sidecar_json(result, cfg, paths));
  return paths;
}

}  // namespace pflab
