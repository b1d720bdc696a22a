#pragma once

// Probe-detuning scans over velocity classes, Doppler averaging and the
// on/off difference (lock-in) signal.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "rydberg/core.hpp"
#include "rydberg/doppler.hpp"
#include "rydberg/dynamics.hpp"

namespace rydberg {

/// Ordered key/value parameter echo.
using Metadata = std::vector<std::pair<std::string, std::string>>;

/// Shortest round-trip text for a double (17 significant digits).
std::string format_number(double x);

Metadata describe(const DriveConfig& drives, const LevelScheme& scheme);
Metadata describe(const DecayModel& decay);
Metadata describe(const VelocityGrid& grid);

enum class Observable { kImSigma21, kReSigma21 };
std::string to_string(Observable o);
Observable observable_from_string(const std::string& s);

struct Spectrum {
  std::string axis_name;
  std::vector<double> axis;
  std::vector<double> values;
  std::string value_name;
  Metadata metadata;

  std::size_t size() const { return axis.size(); }
  /// Throws InvalidArgument unless the axis is strictly increasing and the
  /// lengths match.
  void validate() const;
};

/// Anything that yields a Liouvillian for a (velocity, probe detuning) point.
struct ScanModel {
  std::function<Liouvillian(double v, double delta21)> liouvillian;
  Metadata metadata;
};

/// The five-level Hamiltonian with `decay`; the probe detuning in
/// `drives` is overridden by the scan axis.
ScanModel five_level_model(const LevelScheme& scheme, const DriveConfig& drives,
                           const DecayModel& decay, Convention convention);

/// Worst-case solver-soundness figures over every solved point.
struct Diagnostics {
  double max_residual = 0.0;
  double max_trace_error = 0.0;
  double max_hermiticity_error = 0.0;
  double min_eigenvalue = 1.0;
  long points = 0;

  void merge(const Diagnostics& other);
};

struct ScanOptions {
  bool parallel = true;
  bool diagnostics = false;
  SteadyStateOptions solver;
};

/// Observable values on the (velocity x detuning) grid, row-major by velocity.
struct GridValues {
  std::size_t velocities = 0;
  std::size_t detunings = 0;
  std::vector<double> values;
  Diagnostics diagnostics;

  double at(std::size_t iv, std::size_t id) const { return values[iv * detunings + id]; }
};

/// OpenMP kernel: every grid point is solved independently and written to
/// its own slot, so the output does not depend on the thread count.
GridValues scan_grid_parallel(const ScanModel& model, const VelocityGrid& grid,
                              const std::vector<double>& axis, Observable observable,
                              const ScanOptions& options);

/// Single-threaded reference for scan_grid_parallel.
GridValues scan_grid_serial(const ScanModel& model, const VelocityGrid& grid,
                            const std::vector<double>& axis, Observable observable,
                            const ScanOptions& options);

struct ScanResult {
  std::vector<Spectrum> per_velocity;
  Spectrum averaged;
  Diagnostics diagnostics;
};

/// Solves every (v, delta21) point and Doppler-averages pointwise. Solver
/// failures are rethrown as SolverPointError naming the point.
ScanResult probe_scan(const ScanModel& model, const VelocityGrid& grid,
                      const std::vector<double>& delta21_axis, Observable observable,
                      const ScanOptions& options = {});

/// off - on, pointwise: a Rydberg-induced transmission increase is positive.
Spectrum difference_spectrum(const Spectrum& on, const Spectrum& off);

/// T = exp(-scale * values).
Spectrum transmission(const Spectrum& absorption, double optical_depth_scale);

/// n evenly spaced points from lo to hi inclusive.
std::vector<double> linear_axis(double lo, double hi, std::size_t n);

}  // namespace rydberg
