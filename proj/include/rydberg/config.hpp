#pragma once

// Scenario files: a strict sectioned key = value format.
//
//   [scenario]
//   name = fig3
//   kind = rydberg-difference
//
// '#' and ';' start comments. Unknown sections or keys, duplicate keys and
// sections that do not apply to the scenario kind are errors (ConfigError,
// with file and line).

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rydberg/core.hpp"
#include "rydberg/doppler.hpp"
#include "rydberg/spectra.hpp"
#include "rydberg/stark.hpp"
#include "rydberg/transit.hpp"

namespace rydberg {

enum class ScenarioKind {
  kRydbergDifference,  ///< on/off spectra and their difference
  kDelta54Sweep,       ///< averaged spectra for a list of Rydberg detunings
  kStarkSwitching,     ///< dark-resonance amplitude versus field
  kDopplerFreeScan,    ///< tracked dark eigenvalue versus velocity
  kTransitEstimate,
};
std::string to_string(ScenarioKind k);
ScenarioKind scenario_kind_from_string(const std::string& s);

struct GridSpec {
  double vmin = -10.0;
  double vmax = 10.0;
  double step = 0.5;
  GridScheme scheme = GridScheme::kUniform;
  std::optional<double> doppler_width;

  VelocityGrid build() const;
  bool operator==(const GridSpec&) const = default;
};

struct AxisSpec {
  double min = -3.0;
  double max = 3.0;
  std::size_t points = 601;

  std::vector<double> build() const;
  bool operator==(const AxisSpec&) const = default;
};

struct DecaySpec {
  double gamma4 = 1.0;
  double gamma5 = 0.01;
  double transit_rate = 0.0;
  bool trace_preserving = true;

  DecayModel build() const;
  bool operator==(const DecaySpec&) const = default;
};

struct SweepSpec {
  std::vector<double> delta54 = {0.0, 50.0};
  /// Probe detuning reported in the summary; must be an axis point.
  double probe_point = -0.2;
  /// Also run the model with level 4 eliminated.
  bool eliminated = false;
  double gate = 100.0;

  bool operator==(const SweepSpec&) const = default;
};

struct StarkSpec {
  std::vector<std::string> labels = {"mJ=1/2", "mJ=3/2", "mJ=5/2"};
  std::vector<double> weights = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  std::vector<double> fields = {0.9, 0.9, 0.1};
  double threshold = 5.0;
  int n_reference = 44;
  std::vector<double> e_values = {0.0, 0.1, 0.5, 0.9, 1.1};

  StarkModel build() const;
  bool operator==(const StarkSpec&) const = default;
};

struct AnalysisSpec {
  enum class Model { kEliminated, kFiveLevel };
  Model model = Model::kEliminated;
  /// Re-eliminate level 4 at every velocity instead of at v = 0.
  bool velocity_resolved = false;
  /// Sets delta32 to the level-3 light shift.
  bool compensate_light_shift = true;
  std::vector<double> omega53_scales = {1.0};
  double gate = 100.0;

  bool operator==(const AnalysisSpec&) const = default;
};

struct BeamSpec {
  BeamGeometry geometry;
  double constant = kGaussianTransitConstant;
  double gamma2_hz = 6.0666e6;

  bool operator==(const BeamSpec& o) const {
    return geometry.waist_mm == o.geometry.waist_mm &&
           geometry.temperature_k == o.geometry.temperature_k &&
           geometry.atomic_mass_amu == o.geometry.atomic_mass_amu && constant == o.constant &&
           gamma2_hz == o.gamma2_hz;
  }
};

struct OutputSpec {
  std::string dir;
  bool per_velocity = true;
  /// Plot hint recorded in the sidecar; CSV values are never scaled.
  double display_factor = 5.0;

  bool operator==(const OutputSpec&) const = default;
};

struct ScenarioConfig {
  std::string name;
  ScenarioKind kind = ScenarioKind::kRydbergDifference;
  Convention convention = Convention::kLiteral;
  Observable observable = Observable::kImSigma21;

  double lambda1_nm = 780.24;
  double lambda2_nm = 480.0;
  int n_principal = 44;

  DriveConfig drives;
  DecaySpec decay;
  GridSpec grid;
  AxisSpec axis;
  SweepSpec sweep;
  StarkSpec stark;
  AnalysisSpec analysis;
  BeamSpec beam;
  OutputSpec output;

  LevelScheme scheme() const { return LevelScheme(lambda1_nm, lambda2_nm, n_principal); }
  /// Sections written by to_ini and accepted by parse_config for this kind.
  std::vector<std::string> sections() const;
  /// Semantic checks (ConfigError).
  void validate() const;
  bool operator==(const ScenarioConfig&) const = default;
};

/// Parses and validates. `source` prefixes error messages.
ScenarioConfig parse_config(const std::string& text, const std::string& source = "<config>");
ScenarioConfig load_config(const std::filesystem::path& path);

/// Canonical text: every key of every applicable section, numbers at 17
/// significant digits, so parse_config(to_ini(c)) == c.
std::string to_ini(const ScenarioConfig& config);

}  // namespace rydberg
