#pragma once

// Quadratic Stark shifts of the Rydberg level per |mJ| component and the
// dark-resonance amplitude versus applied rms field.

#include <string>
#include <vector>

#include "rydberg/core.hpp"
#include "rydberg/doppler.hpp"
#include "rydberg/spectra.hpp"

namespace rydberg {

struct StarkComponent {
  std::string label;
  double weight = 0.0;
  /// rms field (V/cm) at which |shift| reaches the suppression threshold for
  /// n = n_reference.
  double suppression_field = 0.0;
};

struct StarkModel {
  std::vector<StarkComponent> components;
  int n_reference = 44;
  /// |shift| in gamma2 that counts as "out of resonance".
  double suppression_threshold = 5.0;
  double scale_exponent = 7.0;

  /// nd5/2 at n = 44: |mJ| = 5/2 suppressed at 0.1 V/cm, 1/2 and 3/2 at
  /// 0.9 V/cm, equal weights.
  static StarkModel nd52();

  /// Weights >= 0 summing to 1 within 1e-12, positive fields, n_reference > 0.
  void validate() const;
  /// Throws UnknownComponent.
  const StarkComponent& component(const std::string& label) const;
  /// C in shift = -C (n/n_ref)^7 E^2.
  double coefficient(const StarkComponent& c) const;
};

/// Level-5 shift in gamma2 (negative: the level is pushed down).
double stark_shift(double e_rms, const std::string& component, const StarkModel& model, int n);

/// Value nearest delta21 = 0 minus the mean of the two end points. Throws
/// AxisTooNarrow if the axis spans less than 1 gamma2.
double rdr_amplitude(const Spectrum& diff);

/// Everything the on/off pipeline needs. `drives.omega54` is the coupling
/// used for the "on" spectrum and drives.delta54 the field-free detuning.
struct SwitchingScenario {
  LevelScheme scheme;
  DriveConfig drives;
  DecayModel decay;
  Convention convention = Convention::kLiteral;
  VelocityGrid grid;
  std::vector<double> delta21_axis;
  StarkModel stark;
  ScanOptions options;
};

struct SwitchingResult {
  /// Normalized amplitude versus E (axis "e_rms").
  Spectrum curve;
  /// Per-component normalized amplitude, same axis.
  std::vector<Spectrum> components;
  /// Un-normalized amplitude at E = 0.
  double reference_amplitude = 0.0;
  Diagnostics diagnostics;
};

/// For each E: per-component Delta54 shifts, on/off difference spectra,
/// weighted combination, rdr_amplitude, normalized to E = 0. Difference
/// spectra are cached per distinct shift.
SwitchingResult switching_curve(const SwitchingScenario& scenario, const std::vector<double>& e_axis);

/// Smallest E at which the normalized amplitude of a single-component model
/// first drops to 0.5. Scans a grid scaled by the component's suppression
/// field at n, then bisects to `rel_tol`. Throws NoExtremum if the curve
/// never reaches 0.5 on the scan.
double half_suppression_field(const SwitchingScenario& scenario, double rel_tol = 1e-9);

}  // namespace rydberg
