#include "rydberg/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "rydberg/errors.hpp"

namespace rydberg {

std::string to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::kRydbergDifference: return "rydberg-difference";
    case ScenarioKind::kDelta54Sweep: return "delta54-sweep";
    case ScenarioKind::kStarkSwitching: return "stark-switching";
    case ScenarioKind::kDopplerFreeScan: return "doppler-free-scan";
    case ScenarioKind::kTransitEstimate: return "transit-estimate";
  }
  return "?";
}

ScenarioKind scenario_kind_from_string(const std::string& s) {
  for (auto k : {ScenarioKind::kRydbergDifference, ScenarioKind::kDelta54Sweep, ScenarioKind::kStarkSwitching,
                 ScenarioKind::kDopplerFreeScan, ScenarioKind::kTransitEstimate}) {
    if (to_string(k) == s) return k;
  }
  throw InvalidArgument("unknown scenario kind '" + s + "'");
}

VelocityGrid GridSpec::build() const { return make_grid(vmin, vmax, step, scheme, doppler_width); }

std::vector<double> AxisSpec::build() const { return linear_axis(min, max, points); }

DecayModel DecaySpec::build() const {
  DecayModel d = DecayModel::five_level(gamma4, gamma5, transit_rate);
  d.trace_preserving = trace_preserving;
  return d;
}

StarkModel StarkSpec::build() const {
  if (labels.size() != weights.size() || labels.size() != fields.size()) {
    throw InvalidArgument("stark labels, weights and fields need equal lengths");
  }
  StarkModel m;
  m.suppression_threshold = threshold;
  m.n_reference = n_reference;
  for (std::size_t i = 0; i < labels.size(); ++i) m.components.push_back({labels[i], weights[i], fields[i]});
  return m;
}

namespace {

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  if (out.size() == 1 && out[0].empty()) out.clear();
  return out;
}

bool parse_plain_double(const std::string& s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto [p, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && p == last;
}

class Reader {
 public:
  Reader(std::string source) : source_(std::move(source)) {}

  void parse(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(in, raw)) {
      ++line;
      std::string s = raw;
      const auto c = s.find_first_of("#;");
      if (c != std::string::npos) s.erase(c);
      s = trim(s);
      if (s.empty()) continue;
      if (s.front() == '[') {
        if (s.back() != ']') fail(line, "malformed section header '" + s + "'");
        section = trim(s.substr(1, s.size() - 2));
        if (!kKnownSections.count(section)) fail(line, "unknown section [" + section + "]");
        if (section_lines_.count(section)) fail(line, "duplicate section [" + section + "]");
        section_lines_[section] = line;
        data_[section];
        continue;
      }
      const auto eq = s.find('=');
      if (eq == std::string::npos) fail(line, "expected 'key = value'");
      if (section.empty()) fail(line, "key outside of any section");
      const std::string key = trim(s.substr(0, eq));
      if (key.empty()) fail(line, "empty key");
      auto& sec = data_[section];
      if (sec.count(key)) fail(line, "duplicate key '" + key + "' in [" + section + "]");
      sec[key] = Entry{trim(s.substr(eq + 1)), line};
    }
  }

  bool has_section(const std::string& section) const { return data_.count(section) > 0; }
  int section_line(const std::string& section) const { return section_lines_.at(section); }

  const Entry* find(const std::string& section, const std::string& key) {
    auto s = data_.find(section);
    if (s == data_.end()) return nullptr;
    auto e = s->second.find(key);
    if (e == s->second.end()) return nullptr;
    e->second.used = true;
    return &e->second;
  }

  std::string required(const std::string& section, const std::string& key) {
    const Entry* e = find(section, key);
    if (!e) throw ConfigError(source_ + ": missing required key '" + key + "' in [" + section + "]");
    if (e->value.empty()) fail(e->line, "key '" + key + "' is empty");
    return e->value;
  }

  void get(const std::string& section, const std::string& key, std::string& out) {
    if (const Entry* e = find(section, key)) out = e->value;
  }

  void get(const std::string& section, const std::string& key, double& out) {
    if (const Entry* e = find(section, key)) out = to_double(*e, e->value);
  }

  void get(const std::string& section, const std::string& key, std::optional<double>& out) {
    if (const Entry* e = find(section, key)) {
      if (e->value == "none") {
        out.reset();
      } else {
        out = to_double(*e, e->value);
      }
    }
  }

  void get(const std::string& section, const std::string& key, int& out) {
    if (const Entry* e = find(section, key)) {
      auto [p, ec] = std::from_chars(e->value.data(), e->value.data() + e->value.size(), out);
      if (ec != std::errc() || p != e->value.data() + e->value.size()) {
        fail(e->line, "'" + key + "' needs an integer, got '" + e->value + "'");
      }
    }
  }

  void get(const std::string& section, const std::string& key, std::size_t& out) {
    int v = static_cast<int>(out);
    get(section, key, v);
    if (const Entry* e = find(section, key); e && v < 0) fail(e->line, "'" + key + "' must be >= 0");
    out = static_cast<std::size_t>(v);
  }

  void get(const std::string& section, const std::string& key, bool& out) {
    if (const Entry* e = find(section, key)) {
      if (e->value == "true") {
        out = true;
      } else if (e->value == "false") {
        out = false;
      } else {
        fail(e->line, "'" + key + "' needs true or false, got '" + e->value + "'");
      }
    }
  }

  void get(const std::string& section, const std::string& key, std::vector<double>& out) {
    if (const Entry* e = find(section, key)) {
      out.clear();
      for (const auto& item : split_list(e->value)) out.push_back(to_double(*e, item));
    }
  }

  void get(const std::string& section, const std::string& key, std::vector<std::string>& out) {
    if (const Entry* e = find(section, key)) out = split_list(e->value);
  }

  template <typename F>
  void get_with(const std::string& section, const std::string& key, F&& convert) {
    if (const Entry* e = find(section, key)) {
      try {
        convert(e->value);
      } catch (const InvalidArgument& ex) {
        fail(e->line, ex.what());
      }
    }
  }

  void check_unused() const {
    for (const auto& [section, keys] : data_) {
      for (const auto& [key, e] : keys) {
        if (!e.used) fail(e.line, "unknown key '" + key + "' in [" + section + "]");
      }
    }
  }

  [[noreturn]] void fail(int line, const std::string& msg) const {
    throw ConfigError(source_ + ":" + std::to_string(line) + ": " + msg);
  }

 private:
  // Accepts plain numbers and simple fractions such as 1/3.
  double to_double(const Entry& e, const std::string& s) const {
    double x = 0.0;
    if (parse_plain_double(s, x)) return x;
    const auto slash = s.find('/');
    double num = 0.0;
    double den = 0.0;
    if (slash != std::string::npos && parse_plain_double(trim(s.substr(0, slash)), num) &&
        parse_plain_double(trim(s.substr(slash + 1)), den) && den != 0.0) {
      return num / den;
    }
    fail(e.line, "not a number: '" + s + "'");
  }

  static inline const std::set<std::string> kKnownSections = {
      "scenario", "scheme", "drives", "decay", "grid", "axis", "sweep", "stark", "analysis", "beam", "output"};

  std::string source_;
  std::map<std::string, std::map<std::string, Entry>> data_;
  std::map<std::string, int> section_lines_;
};

std::string join(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + format_number(xs[i]);
  return s;
}

std::string join(const std::vector<std::string>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + xs[i];
  return s;
}

std::string model_name(AnalysisSpec::Model m) {
  return m == AnalysisSpec::Model::kEliminated ? "eliminated" : "five-level";
}

}  // namespace

std::vector<std::string> ScenarioConfig::sections() const {
  switch (kind) {
    case ScenarioKind::kRydbergDifference:
      return {"scenario", "scheme", "drives", "decay", "grid", "axis", "output"};
    case ScenarioKind::kDelta54Sweep:
      return {"scenario", "scheme", "drives", "decay", "grid", "axis", "sweep", "output"};
    case ScenarioKind::kStarkSwitching:
      return {"scenario", "scheme", "drives", "decay", "grid", "axis", "stark", "output"};
    case ScenarioKind::kDopplerFreeScan:
      return {"scenario", "scheme", "drives", "grid", "analysis", "output"};
    case ScenarioKind::kTransitEstimate:
      return {"scenario", "beam", "output"};
  }
  return {};
}

void ScenarioConfig::validate() const {
  auto check = [&](auto&& f) {
    try {
      f();
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(name + ": " + e.what());
    }
  };
  if (name.empty()) throw ConfigError("scenario name is empty");
  if (name.find_first_of("/\\ \t") != std::string::npos) {
    throw ConfigError("scenario name '" + name + "' may not contain slashes or spaces");
  }
  const auto secs = sections();
  auto uses = [&](const char* s) { return std::find(secs.begin(), secs.end(), s) != secs.end(); };

  if (uses("scheme")) check([&] { (void)scheme(); });
  if (uses("drives")) check([&] { drives.validate(); });
  if (uses("decay")) check([&] { decay.build().validate(); });
  if (uses("grid")) check([&] { (void)grid.build(); });
  if (uses("axis")) {
    check([&] {
      if (axis.points < 2) throw InvalidArgument("axis needs at least 2 points");
      if (!(axis.max > axis.min)) throw InvalidArgument("axis needs max > min");
    });
  }
  if (!(output.display_factor > 0.0)) throw ConfigError(name + ": display_factor must be positive");

  switch (kind) {
    case ScenarioKind::kDelta54Sweep:
      check([&] {
        if (sweep.delta54.empty()) throw InvalidArgument("sweep needs at least one delta54 value");
        for (double d : sweep.delta54) {
          if (!std::isfinite(d)) throw InvalidArgument("non-finite delta54 in sweep");
        }
        const auto ax = axis.build();
        const bool on_axis = std::any_of(ax.begin(), ax.end(),
                                         [&](double x) { return std::abs(x - sweep.probe_point) < 1e-9; });
        if (!on_axis) throw InvalidArgument("probe_point " + format_number(sweep.probe_point) + " is not an axis point");
      });
      break;
    case ScenarioKind::kStarkSwitching:
      check([&] {
        stark.build().validate();
        for (const auto& l : stark.labels) {
          if (l.empty() || l.find_first_of(",#;") != std::string::npos) {
            throw InvalidArgument("stark label '" + l + "' is empty or contains ',', '#' or ';'");
          }
        }
        if (stark.e_values.empty()) throw InvalidArgument("stark e_values is empty");
        for (std::size_t i = 0; i < stark.e_values.size(); ++i) {
          if (!(stark.e_values[i] >= 0.0)) throw InvalidArgument("stark e_values must be >= 0");
          if (i && !(stark.e_values[i] > stark.e_values[i - 1])) {
            throw InvalidArgument("stark e_values must be strictly increasing");
          }
        }
        if (axis.max - axis.min < 1.0) throw InvalidArgument("axis must span at least 1 gamma2");
      });
      break;
    case ScenarioKind::kDopplerFreeScan:
      check([&] {
        if (analysis.omega53_scales.empty()) throw InvalidArgument("omega53_scales is empty");
        for (double s : analysis.omega53_scales) {
          if (!(s >= 0.0) || !std::isfinite(s)) throw InvalidArgument("omega53 scales must be finite and >= 0");
          const bool fixed = analysis.model == AnalysisSpec::Model::kEliminated && !analysis.velocity_resolved;
          if (s != 1.0 && !fixed) {
            throw InvalidArgument("omega53 scales other than 1 need model = eliminated without velocity_resolved");
          }
        }
      });
      break;
    case ScenarioKind::kTransitEstimate:
      check([&] { (void)transit_linewidth(beam.geometry, beam.constant, beam.gamma2_hz); });
      break;
    default:
      break;
  }
}

ScenarioConfig parse_config(const std::string& text, const std::string& source) {
  Reader r(source);
  r.parse(text);
  ScenarioConfig c;
  c.name = r.required("scenario", "name");
  const std::string kind = r.required("scenario", "kind");
  try {
    c.kind = scenario_kind_from_string(kind);
  } catch (const InvalidArgument& e) {
    r.fail(r.find("scenario", "kind")->line, e.what());
  }
  r.get_with("scenario", "convention", [&](const std::string& v) { c.convention = convention_from_string(v); });
  r.get_with("scenario", "observable", [&](const std::string& v) { c.observable = observable_from_string(v); });

  const auto allowed = c.sections();
  for (const char* s : {"scheme", "drives", "decay", "grid", "axis", "sweep", "stark", "analysis", "beam", "output"}) {
    if (r.has_section(s) && std::find(allowed.begin(), allowed.end(), s) == allowed.end()) {
      r.fail(r.section_line(s), std::string("section [") + s + "] does not apply to kind " + kind);
    }
  }

  r.get("scheme", "lambda1_nm", c.lambda1_nm);
  r.get("scheme", "lambda2_nm", c.lambda2_nm);
  r.get("scheme", "n_principal", c.n_principal);

  r.get("drives", "delta32", c.drives.delta32);
  r.get("drives", "delta43", c.drives.delta43);
  r.get("drives", "delta54", c.drives.delta54);
  r.get("drives", "omega21", c.drives.omega21);
  r.get("drives", "omega32", c.drives.omega32);
  r.get("drives", "omega43", c.drives.omega43);
  r.get("drives", "omega54", c.drives.omega54);
  r.get("drives", "k_prime_ratio", c.drives.override_k_prime_ratio);

  r.get("decay", "gamma4", c.decay.gamma4);
  r.get("decay", "gamma5", c.decay.gamma5);
  r.get("decay", "transit_rate", c.decay.transit_rate);
  r.get_with("decay", "mode", [&](const std::string& v) {
    if (v == "trace-preserving") {
      c.decay.trace_preserving = true;
    } else if (v == "literal-lossy") {
      c.decay.trace_preserving = false;
    } else {
      throw InvalidArgument("decay mode must be trace-preserving or literal-lossy, got '" + v + "'");
    }
  });

  r.get("grid", "vmin", c.grid.vmin);
  r.get("grid", "vmax", c.grid.vmax);
  r.get("grid", "step", c.grid.step);
  r.get_with("grid", "scheme", [&](const std::string& v) { c.grid.scheme = grid_scheme_from_string(v); });
  r.get("grid", "doppler_width", c.grid.doppler_width);

  r.get("axis", "min", c.axis.min);
  r.get("axis", "max", c.axis.max);
  r.get("axis", "points", c.axis.points);

  r.get("sweep", "delta54", c.sweep.delta54);
  r.get("sweep", "probe_point", c.sweep.probe_point);
  r.get("sweep", "eliminated", c.sweep.eliminated);
  r.get("sweep", "gate", c.sweep.gate);

  r.get("stark", "labels", c.stark.labels);
  r.get("stark", "weights", c.stark.weights);
  r.get("stark", "fields", c.stark.fields);
  r.get("stark", "threshold", c.stark.threshold);
  r.get("stark", "n_reference", c.stark.n_reference);
  r.get("stark", "e_values", c.stark.e_values);

  r.get_with("analysis", "model", [&](const std::string& v) {
    if (v == "eliminated") {
      c.analysis.model = AnalysisSpec::Model::kEliminated;
    } else if (v == "five-level") {
      c.analysis.model = AnalysisSpec::Model::kFiveLevel;
    } else {
      throw InvalidArgument("analysis model must be eliminated or five-level, got '" + v + "'");
    }
  });
  r.get("analysis", "velocity_resolved", c.analysis.velocity_resolved);
  r.get("analysis", "compensate_light_shift", c.analysis.compensate_light_shift);
  r.get("analysis", "omega53_scales", c.analysis.omega53_scales);
  r.get("analysis", "gate", c.analysis.gate);

  r.get("beam", "waist_mm", c.beam.geometry.waist_mm);
  r.get("beam", "temperature_k", c.beam.geometry.temperature_k);
  r.get("beam", "atomic_mass_amu", c.beam.geometry.atomic_mass_amu);
  r.get("beam", "constant", c.beam.constant);
  r.get("beam", "gamma2_hz", c.beam.gamma2_hz);

  r.get("output", "dir", c.output.dir);
  r.get("output", "per_velocity", c.output.per_velocity);
  r.get("output", "display_factor", c.output.display_factor);

  r.check_unused();
  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

std::string to_ini(const ScenarioConfig& c) {
  std::ostringstream o;
  auto kv = [&](const std::string& k, const std::string& v) {
    o << k << (v.empty() ? " =" : " = ") << v << "\n";
  };
  auto num = [&](const std::string& k, double v) { kv(k, format_number(v)); };
  auto flag = [&](const std::string& k, bool v) { kv(k, v ? "true" : "false"); };

  for (const auto& s : c.sections()) {
    if (s != "scenario") o << "\n";
    o << "[" << s << "]\n";
    if (s == "scenario") {
      kv("name", c.name);
      kv("kind", to_string(c.kind));
      kv("convention", to_string(c.convention));
      kv("observable", to_string(c.observable));
    } else if (s == "scheme") {
      num("lambda1_nm", c.lambda1_nm);
      num("lambda2_nm", c.lambda2_nm);
      kv("n_principal", std::to_string(c.n_principal));
    } else if (s == "drives") {
      num("delta32", c.drives.delta32);
      num("delta43", c.drives.delta43);
      num("delta54", c.drives.delta54);
      num("omega21", c.drives.omega21);
      num("omega32", c.drives.omega32);
      num("omega43", c.drives.omega43);
      num("omega54", c.drives.omega54);
      kv("k_prime_ratio",
         c.drives.override_k_prime_ratio ? format_number(*c.drives.override_k_prime_ratio) : "none");
    } else if (s == "decay") {
      num("gamma4", c.decay.gamma4);
      num("gamma5", c.decay.gamma5);
      num("transit_rate", c.decay.transit_rate);
      kv("mode", c.decay.trace_preserving ? "trace-preserving" : "literal-lossy");
    } else if (s == "grid") {
      num("vmin", c.grid.vmin);
      num("vmax", c.grid.vmax);
      num("step", c.grid.step);
      kv("scheme", to_string(c.grid.scheme));
      kv("doppler_width", c.grid.doppler_width ? format_number(*c.grid.doppler_width) : "none");
    } else if (s == "axis") {
      num("min", c.axis.min);
      num("max", c.axis.max);
      kv("points", std::to_string(c.axis.points));
    } else if (s == "sweep") {
      kv("delta54", join(c.sweep.delta54));
      num("probe_point", c.sweep.probe_point);
      flag("eliminated", c.sweep.eliminated);
      num("gate", c.sweep.gate);
    } else if (s == "stark") {
      kv("labels", join(c.stark.labels));
      kv("weights", join(c.stark.weights));
      kv("fields", join(c.stark.fields));
      num("threshold", c.stark.threshold);
      kv("n_reference", std::to_string(c.stark.n_reference));
      kv("e_values", join(c.stark.e_values));
    } else if (s == "analysis") {
      kv("model", model_name(c.analysis.model));
      flag("velocity_resolved", c.analysis.velocity_resolved);
      flag("compensate_light_shift", c.analysis.compensate_light_shift);
      kv("omega53_scales", join(c.analysis.omega53_scales));
      num("gate", c.analysis.gate);
    } else if (s == "beam") {
      num("waist_mm", c.beam.geometry.waist_mm);
      num("temperature_k", c.beam.geometry.temperature_k);
      num("atomic_mass_amu", c.beam.geometry.atomic_mass_amu);
      num("constant", c.beam.constant);
      num("gamma2_hz", c.beam.gamma2_hz);
    } else if (s == "output") {
      kv("dir", c.output.dir);
      flag("per_velocity", c.output.per_velocity);
      num("display_factor", c.output.display_factor);
    }
  }
  return o.str();
}

}  // namespace rydberg
