// rydsim: run shipped or user scenarios and write CSV spectra.

#include <omp.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rydberg/errors.hpp"
#include "rydberg/scenario.hpp"
#include "rydberg/transit.hpp"

namespace {

enum ExitCode { kOk = 0, kConfigFailure = 1, kSolverFailure = 2 };

constexpr const char* kOutputDirEnv = "RYDSIM_OUTPUT_DIR";

std::filesystem::path output_dir(const std::string& flag, const rydberg::ScenarioConfig& c) {
  if (!flag.empty()) return flag;
  if (!c.output.dir.empty()) return c.output.dir;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return ".";
}

// Problems with the inputs exit 1, failures inside the numerics exit 2.
int report(const std::exception& e) {
  using namespace rydberg;
  if (dynamic_cast<const SolverPointError*>(&e) || dynamic_cast<const NullSpaceDegenerate*>(&e) ||
      dynamic_cast<const StepSizeUnderflow*>(&e) || dynamic_cast<const TrackingLost*>(&e) ||
      dynamic_cast<const NoExtremum*>(&e)) {
    std::cerr << "rydsim: solver error: " << e.what() << "\n";
    return kSolverFailure;
  }
  if (dynamic_cast<const Error*>(&e)) {
    std::cerr << "rydsim: config error: " << e.what() << "\n";
    return kConfigFailure;
  }
  std::cerr << "rydsim: error: " << e.what() << "\n";
  return kSolverFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Five-level Rydberg dark-resonance steady-state simulator"};
  app.set_version_flag("--version", std::string(rydberg::kToolVersion));
  app.require_subcommand(1);

  std::string out_flag;
  int threads = 0;
  std::string convention;
  std::string user_dir;
  app.add_option("--output-dir", out_flag, "Directory for CSV and sidecar files (default: $RYDSIM_OUTPUT_DIR or .)");
  app.add_option("--threads", threads, "OpenMP threads (0 keeps the runtime default)")->check(CLI::NonNegativeNumber);
  app.add_option("--convention", convention, "Override the Hamiltonian convention")
      ->check(CLI::IsMember({"literal", "standard"}));
  app.add_option("--user-dir", user_dir, "Extra directory of *.cfg scenarios");

  auto* run = app.add_subcommand("run", "Run a scenario (config path or scenario name)");
  run->fallthrough();
  std::string target;
  bool serial = false;
  run->add_option("config", target, "Config file or scenario name")->required();
  run->add_flag("--serial", serial, "Use the single-threaded reference kernel");

  auto* list = app.add_subcommand("list", "List shipped and user scenarios");
  list->fallthrough();

  auto* show = app.add_subcommand("show", "Print the canonical form of a scenario config");
  show->fallthrough();
  std::string show_target;
  show->add_option("config", show_target, "Config file or scenario name")->required();

  auto* transit = app.add_subcommand("transit", "Print a transit-time linewidth estimate");
  rydberg::BeamGeometry geom;
  double constant = rydberg::kGaussianTransitConstant;
  double gamma2_hz = 6.0666e6;
  transit->add_option("--waist-mm", geom.waist_mm, "1/e^2 beam radius in mm")->capture_default_str();
  transit->add_option("--temperature-k", geom.temperature_k, "Vapour temperature in K")->capture_default_str();
  transit->add_option("--mass-amu", geom.atomic_mass_amu, "Atomic mass in u")->capture_default_str();
  transit->add_option("--constant", constant, "Order-one prefactor C")->capture_default_str();
  transit->add_option("--gamma2-hz", gamma2_hz, "Probe excited-state linewidth in Hz")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigFailure;
  }

  if (threads > 0) omp_set_num_threads(threads);
  const std::optional<std::filesystem::path> udir =
      user_dir.empty() ? std::nullopt : std::optional<std::filesystem::path>(user_dir);

  try {
    if (*list) {
      for (const auto& name : rydberg::list_scenarios(udir)) std::cout << name << "\n";
      return kOk;
    }
    if (*show) {
      std::cout << rydberg::to_ini(rydberg::resolve_scenario(show_target, udir));
      return kOk;
    }
    if (*transit) {
      const auto t = rydberg::transit_linewidth(geom, constant, gamma2_hz);
      std::printf("mean_speed_m_s=%.17g\nfwhm_khz=%.17g\ntransit_rate=%.17g\n", t.mean_speed_m_s, t.fwhm_khz,
                  t.transit_rate);
      return kOk;
    }
    const rydberg::ScenarioConfig config = rydberg::resolve_scenario(target, udir);
    rydberg::RunOptions opts;
    opts.parallel = !serial;
    if (!convention.empty()) opts.convention = rydberg::convention_from_string(convention);
    const rydberg::RunResult result = rydberg::run_scenario(config, opts);
    const auto dir = output_dir(out_flag, result.config);
    rydberg::write_outputs(result, dir);
    for (const auto& f : result.files) std::cout << (dir / f.name).string() << "\n";
    return kOk;
  } catch (const std::exception& e) {
    return report(e);
  }
}
