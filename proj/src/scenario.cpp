#include "rydberg/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

#include "rydberg/analysis.hpp"
#include "rydberg/errors.hpp"
#include "rydberg/stark.hpp"
#include "rydberg/transit.hpp"

namespace rydberg {

const OutputFile& RunResult::file(const std::string& name) const {
  for (const auto& f : files) {
    if (f.name == name) return f;
  }
  throw InvalidArgument("no output file named '" + name + "'");
}

std::string RunResult::summary_value(const std::string& key) const {
  for (const auto& [k, v] : summary) {
    if (k == key) return v;
  }
  throw InvalidArgument("no summary entry '" + key + "'");
}

std::string to_csv(const Metadata& metadata, const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size()) throw LengthMismatch("csv header and column counts differ");
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns) {
    if (c.size() != rows) throw LengthMismatch("csv columns have different lengths");
  }
  std::string out;
  for (const auto& [k, v] : metadata) out += "# " + k + "=" + v + "\n";
  for (std::size_t j = 0; j < header.size(); ++j) out += (j ? "," : "") + header[j];
  out += "\n";
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (j) out += ",";
      out += format_number(columns[j][i]);
    }
    out += "\n";
  }
  return out;
}

namespace {

using nlohmann::ordered_json;

Metadata header_metadata(const ScenarioConfig& c) {
  return {{"tool", kToolName},
          {"version", kToolVersion},
          {"scenario", c.name},
          {"kind", to_string(c.kind)},
          {"convention", to_string(c.convention)}};
}

Metadata concat(Metadata a, const Metadata& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

Metadata without_key(Metadata m, const std::string& key) {
  m.erase(std::remove_if(m.begin(), m.end(), [&](const auto& kv) { return kv.first == key; }), m.end());
  return m;
}

std::string short_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

double value_at(const Spectrum& s, double x) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (std::abs(s.axis[i] - x) < 1e-9) return s.values[i];
  }
  throw InvalidArgument("axis point " + format_number(x) + " not found");
}

ScanOptions scan_options(const RunOptions& o) {
  ScanOptions s;
  s.parallel = o.parallel;
  s.diagnostics = true;
  return s;
}

class Runner {
 public:
  Runner(const ScenarioConfig& c, const RunOptions& o) : c_(c), opts_(o) { result_.config = c; }

  RunResult run() {
    switch (c_.kind) {
      case ScenarioKind::kRydbergDifference: rydberg_difference(); break;
      case ScenarioKind::kDelta54Sweep: delta54_sweep(); break;
      case ScenarioKind::kStarkSwitching: stark_switching(); break;
      case ScenarioKind::kDopplerFreeScan: doppler_free_scan(); break;
      case ScenarioKind::kTransitEstimate: transit_estimate(); break;
    }
    sidecar();
    return std::move(result_);
  }

 private:
  void add_spectrum(const std::string& name, const Spectrum& s) {
    add(name, to_csv(concat(header_metadata(c_), s.metadata), {s.axis_name, s.value_name}, {s.axis, s.values}));
  }

  void add_per_velocity(const std::string& name, const ScanResult& r) {
    if (!c_.output.per_velocity) return;
    const VelocityGrid grid = c_.grid.build();
    std::vector<double> v;
    std::vector<double> x;
    std::vector<double> y;
    for (std::size_t k = 0; k < r.per_velocity.size(); ++k) {
      const Spectrum& s = r.per_velocity[k];
      for (std::size_t i = 0; i < s.size(); ++i) {
        v.push_back(grid.points[k]);
        x.push_back(s.axis[i]);
        y.push_back(s.values[i]);
      }
    }
    const Spectrum& first = r.per_velocity.front();
    add(name, to_csv(concat(header_metadata(c_), without_key(first.metadata, "velocity")),
                     {"velocity", first.axis_name, first.value_name}, {v, x, y}));
  }

  void add(const std::string& name, std::string content) {
    result_.files.push_back({c_.name + "_" + name + ".csv", std::move(content)});
  }

  void note(const std::string& key, double value) { result_.summary.emplace_back(key, format_number(value)); }
  void note(const std::string& key, const std::string& value) { result_.summary.emplace_back(key, value); }

  ScanResult scan(const ScanModel& model) {
    ScanResult r = probe_scan(model, c_.grid.build(), c_.axis.build(), c_.observable, scan_options(opts_));
    result_.diagnostics.merge(r.diagnostics);
    return r;
  }

  std::size_t centre_index(const Spectrum& s) const {
    std::size_t k = 0;
    for (std::size_t i = 1; i < s.size(); ++i) {
      if (std::abs(s.axis[i]) < std::abs(s.axis[k])) k = i;
    }
    return k;
  }

  void rydberg_difference() {
    const LevelScheme scheme = c_.scheme();
    const DecayModel decay = c_.decay.build();
    DriveConfig off_drives = c_.drives;
    off_drives.omega54 = 0.0;
    const ScanResult off = scan(five_level_model(scheme, off_drives, decay, c_.convention));
    const ScanResult on = scan(five_level_model(scheme, c_.drives, decay, c_.convention));
    const Spectrum diff = difference_spectrum(on.averaged, off.averaged);

    add_spectrum("off_averaged", off.averaged);
    add_spectrum("on_averaged", on.averaged);
    add_spectrum("difference", diff);
    add_per_velocity("off_per_velocity", off);
    add_per_velocity("on_per_velocity", on);

    const std::size_t k = centre_index(diff);
    note("centre_delta21", diff.axis[k]);
    note("off_averaged_centre", off.averaged.values[k]);
    note("on_averaged_centre", on.averaged.values[k]);
    note("difference_centre", diff.values[k]);
    if (diff.axis.back() - diff.axis.front() >= 1.0) note("rdr_amplitude", rdr_amplitude(diff));
  }

  void delta54_sweep() {
    const LevelScheme scheme = c_.scheme();
    const DecayModel decay = c_.decay.build();
    std::vector<double> d54;
    std::vector<double> full_at;
    std::vector<double> elim_at;
    std::vector<double> max_rel;
    for (double d : c_.sweep.delta54) {
      DriveConfig drives = c_.drives;
      drives.delta54 = d;
      const std::string tag = "delta54_" + short_number(d);
      const ScanResult full = scan(five_level_model(scheme, drives, decay, c_.convention));
      add_spectrum(tag + "_averaged", full.averaged);
      add_per_velocity(tag + "_per_velocity", full);
      d54.push_back(d);
      full_at.push_back(value_at(full.averaged, c_.sweep.probe_point));
      note("absorption_at_probe." + tag, full_at.back());
      if (c_.sweep.eliminated) {
        const FourLevelConfig cfg = adiabatic_eliminate(scheme, drives, decay, c_.convention, c_.sweep.gate);
        const ScanResult elim = scan(four_level_model(cfg));
        add_spectrum(tag + "_eliminated_averaged", elim.averaged);
        elim_at.push_back(value_at(elim.averaged, c_.sweep.probe_point));
        double worst = 0.0;
        for (std::size_t i = 0; i < full.averaged.size(); ++i) {
          const double a = full.averaged.values[i];
          worst = std::max(worst, std::abs(elim.averaged.values[i] - a) / std::abs(a));
        }
        max_rel.push_back(worst);
        note("eliminated_absorption_at_probe." + tag, elim_at.back());
        note("max_relative_difference." + tag, worst);
        note("omega53." + tag, cfg.omega53);
        note("level3_shift." + tag, cfg.level3_shift);
        note("level5_shift." + tag, cfg.level5_shift);
      }
    }
    Metadata meta = header_metadata(c_);
    meta.emplace_back("probe_point", format_number(c_.sweep.probe_point));
    std::vector<std::string> header = {"delta54", "absorption_at_probe"};
    std::vector<std::vector<double>> cols = {d54, full_at};
    if (c_.sweep.eliminated) {
      header.insert(header.end(), {"eliminated_absorption_at_probe", "max_relative_difference"});
      cols.push_back(elim_at);
      cols.push_back(max_rel);
    }
    add("summary", to_csv(meta, header, cols));
  }

  void stark_switching() {
    SwitchingScenario s;
    s.scheme = c_.scheme();
    s.drives = c_.drives;
    s.decay = c_.decay.build();
    s.convention = c_.convention;
    s.grid = c_.grid.build();
    s.delta21_axis = c_.axis.build();
    s.stark = c_.stark.build();
    s.options = scan_options(opts_);
    const SwitchingResult r = switching_curve(s, c_.stark.e_values);
    result_.diagnostics.merge(r.diagnostics);

    std::vector<std::string> header = {"e_rms", "normalized_amplitude"};
    std::vector<std::vector<double>> cols = {r.curve.axis, r.curve.values};
    for (std::size_t k = 0; k < r.components.size(); ++k) {
      header.push_back("component_" + s.stark.components[k].label);
      cols.push_back(r.components[k].values);
    }
    add("curve", to_csv(concat(header_metadata(c_), r.curve.metadata), header, cols));
    note("reference_amplitude", r.reference_amplitude);
    for (std::size_t i = 0; i < r.curve.size(); ++i) {
      note("normalized_amplitude.e_rms=" + short_number(r.curve.axis[i]), r.curve.values[i]);
    }
  }

  void doppler_free_scan() {
    const LevelScheme scheme = c_.scheme();
    const std::vector<double> vs = c_.grid.build().points;
    const double kr = c_.drives.k_prime_ratio(scheme);
    note("k_prime_ratio", kr);
    if (kr > 0.0) note("balanced_omega53", balance_omega53(c_.drives.omega32, kr));

    const bool eliminated = c_.analysis.model == AnalysisSpec::Model::kEliminated;
    FourLevelConfig cfg;
    const bool need_elimination = eliminated || c_.analysis.compensate_light_shift;
    if (need_elimination) {
      cfg = adiabatic_eliminate(scheme, c_.drives, DecayModel::five_level(), c_.convention, c_.analysis.gate);
      if (!c_.analysis.velocity_resolved) cfg.intermediate.reset();
      note("omega53", cfg.omega53);
      note("level3_shift", cfg.level3_shift);
      note("level5_shift", cfg.level5_shift);
    }
    DriveConfig drives = c_.drives;
    if (c_.analysis.compensate_light_shift) {
      cfg.delta32 = cfg.level3_shift;
      drives.delta32 = cfg.level3_shift;
      note("delta32", cfg.level3_shift);
    }

    for (double scale : c_.analysis.omega53_scales) {
      std::function<HamiltonianMatrix(double)> h;
      FourLevelConfig scaled = cfg;
      scaled.omega53 *= scale;
      if (eliminated) {
        h = [&scaled](double v) { return build_four_level_hamiltonian(scaled.at_velocity(v), v); };
      } else {
        h = [&](double v) { return build_hamiltonian(scheme, drives, v, c_.convention); };
      }
      const EigenSweep sweep = track_dark_eigenvalue(h, vs);
      const std::vector<double> tracked = sweep.tracked_values();
      const auto [lo, hi] = std::minmax_element(tracked.begin(), tracked.end());
      const std::string tag = "scale_" + short_number(scale);
      note("residual." + tag, *hi - *lo);
      note("min_overlap." + tag, sweep.min_overlap);

      std::vector<std::string> header = {"velocity", "tracked_eigenvalue"};
      std::vector<std::vector<double>> cols = {sweep.velocities, tracked};
      const std::size_t m = sweep.eigenvalues.front().size();
      for (std::size_t k = 0; k < m; ++k) {
        header.push_back("eigenvalue_" + std::to_string(k));
        std::vector<double> col;
        for (const auto& e : sweep.eigenvalues) col.push_back(e[k]);
        cols.push_back(std::move(col));
      }
      Metadata meta = header_metadata(c_);
      meta.emplace_back("model", eliminated ? (c_.analysis.velocity_resolved ? "eliminated-velocity-resolved"
                                                                            : "eliminated")
                                            : "five-level");
      meta.emplace_back("omega53_scale", format_number(scale));
      if (eliminated) meta.emplace_back("omega53", format_number(scaled.omega53));
      meta.emplace_back("k_prime_ratio", format_number(kr));
      meta.emplace_back("residual", format_number(*hi - *lo));
      add(tag, to_csv(meta, header, cols));
    }
  }

  void transit_estimate() {
    const TransitEstimate t = transit_linewidth(c_.beam.geometry, c_.beam.constant, c_.beam.gamma2_hz);
    const auto& g = c_.beam.geometry;
    add("estimate", to_csv(header_metadata(c_),
                           {"waist_mm", "temperature_k", "atomic_mass_amu", "constant", "gamma2_hz",
                            "mean_speed_m_s", "fwhm_khz", "transit_rate"},
                           {{g.waist_mm}, {g.temperature_k}, {g.atomic_mass_amu}, {c_.beam.constant},
                            {c_.beam.gamma2_hz}, {t.mean_speed_m_s}, {t.fwhm_khz}, {t.transit_rate}}));
    note("mean_speed_m_s", t.mean_speed_m_s);
    note("fwhm_khz", t.fwhm_khz);
    note("transit_rate", t.transit_rate);
  }

  void sidecar() {
    ordered_json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["scenario"] = c_.name;
    j["kind"] = to_string(c_.kind);
    j["convention"] = to_string(c_.convention);
    j["config"] = to_ini(c_);
    ordered_json files = ordered_json::array();
    for (const auto& f : result_.files) files.push_back(f.name);
    j["files"] = files;
    const Diagnostics& d = result_.diagnostics;
    j["diagnostics"] = {{"points", d.points},
                        {"max_residual", d.max_residual},
                        {"max_trace_error", d.max_trace_error},
                        {"max_hermiticity_error", d.max_hermiticity_error},
                        {"min_eigenvalue", d.min_eigenvalue}};
    ordered_json summary = ordered_json::object();
    for (const auto& [k, v] : result_.summary) summary[k] = v;
    j["summary"] = summary;
    j["plot"] = {{"per_velocity_display_factor", c_.output.display_factor}};
    result_.files.push_back({c_.name + ".meta.json", j.dump(2) + "\n"});
  }

  const ScenarioConfig& c_;
  RunOptions opts_;
  RunResult result_;
};

}  // namespace

RunResult run_scenario(const ScenarioConfig& config, const RunOptions& options) {
  ScenarioConfig c = config;
  if (options.convention) c.convention = *options.convention;
  c.validate();
  return Runner(c, options).run();
}

void write_outputs(const RunResult& result, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir.string() + "': " + ec.message());
  for (const auto& f : result.files) {
    const auto path = dir / f.name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << f.content;
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  }
}

namespace {

struct UserScenario {
  std::string name;
  std::filesystem::path path;
};

std::vector<UserScenario> scan_user_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw ConfigError("user config dir '" + dir.string() + "' is not a directory");
  std::vector<std::filesystem::path> paths;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".cfg") paths.push_back(e.path());
  }
  std::sort(paths.begin(), paths.end());

  std::map<std::string, std::string> seen;
  for (const auto& p : presets()) seen[p.name] = "preset " + p.name;
  std::vector<UserScenario> out;
  for (const auto& p : paths) {
    const ScenarioConfig c = load_config(p);
    auto [it, inserted] = seen.emplace(c.name, p.string());
    if (!inserted) {
      throw ConfigError("scenario name collision: '" + c.name + "' is defined by " + it->second + " and " + p.string());
    }
    out.push_back({c.name, p});
  }
  return out;
}

}  // namespace

std::vector<std::string> list_scenarios(const std::optional<std::filesystem::path>& user_dir) {
  std::vector<std::string> names;
  for (const auto& p : presets()) names.push_back(p.name);
  if (user_dir) {
    for (const auto& u : scan_user_dir(*user_dir)) names.push_back(u.name + " (user)");
  }
  return names;
}

ScenarioConfig resolve_scenario(const std::string& arg, const std::optional<std::filesystem::path>& user_dir) {
  if (std::filesystem::is_regular_file(arg)) return load_config(arg);
  for (const auto& p : presets()) {
    if (p.name == arg) return parse_config(p.text, "preset:" + p.name);
  }
  if (user_dir) {
    for (const auto& u : scan_user_dir(*user_dir)) {
      if (u.name == arg) return load_config(u.path);
    }
  }
  throw ConfigError("no config file or scenario named '" + arg + "'");
}

}  // namespace rydberg
