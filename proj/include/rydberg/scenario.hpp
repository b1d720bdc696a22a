#pragma once

// Runs a ScenarioConfig end to end and renders its CSV files and metadata
// sidecar in memory; writing to disk is a separate step.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rydberg/config.hpp"
#include "rydberg/spectra.hpp"

namespace rydberg {

inline constexpr const char* kToolName = "rydsim";
inline constexpr const char* kToolVersion = "1.0.0";

struct OutputFile {
  std::string name;
  std::string content;
};

struct RunOptions {
  /// Replaces the config's convention when set.
  std::optional<Convention> convention;
  bool parallel = true;
};

struct RunResult {
  ScenarioConfig config;  ///< after overrides
  std::vector<OutputFile> files;  ///< CSVs then the sidecar
  Diagnostics diagnostics;
  /// Scalar results (amplitudes, residuals, ratios) also echoed in the sidecar.
  Metadata summary;

  const OutputFile& file(const std::string& name) const;
  std::string summary_value(const std::string& key) const;
};

/// `# key=value` lines, a header row, then one row per index with every
/// number at 17 significant digits. All columns must have equal length.
std::string to_csv(const Metadata& metadata, const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& columns);

RunResult run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

/// Creates `dir` if needed and writes every file. Throws ConfigError when the
/// directory cannot be created or a file cannot be written.
void write_outputs(const RunResult& result, const std::filesystem::path& dir);

/// Shipped presets in listing order.
struct Preset {
  std::string name;
  std::string text;
};
const std::vector<Preset>& presets();

/// Preset names, then user-dir scenario names suffixed " (user)". A user
/// scenario whose name repeats a preset or another user file is a
/// ConfigError naming both sources.
std::vector<std::string> list_scenarios(const std::optional<std::filesystem::path>& user_dir = std::nullopt);

/// `arg` as a file path if it exists, else a preset name, else a scenario
/// name from `user_dir`. Throws ConfigError if nothing matches.
ScenarioConfig resolve_scenario(const std::string& arg,
                                const std::optional<std::filesystem::path>& user_dir = std::nullopt);

}  // namespace rydberg
