#pragma once

// Dressed-state eigenvalue analysis: the effective two-photon reduction of the
// Rydberg ladder, the Doppler-free balance condition and its numerical check.

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "rydberg/core.hpp"
#include "rydberg/spectra.hpp"

namespace rydberg {

/// Omega43 * Omega54 / (2 Delta43), the standard-convention effective Rabi
/// frequency of the far-detuned two-photon step.
double effective_two_photon(double omega43, double omega54, double delta43);

/// Omega32 * sqrt(k'/k1). Throws NegativeRatio for k'/k1 <= 0, which is what
/// the physical signed ratio of a 780/480 nm ladder gives.
double balance_omega53(double omega32, double k_prime_ratio);

/// Level 4 parameters kept so the elimination can be re-evaluated at each
/// velocity (the intermediate detuning is Delta43 + v).
struct IntermediateLevel {
  double delta43 = 0.0;
  double omega43 = 0.0;
  double omega54 = 0.0;
  DecayModel five_level_decay;
};

/// Effective model on levels (1, 2, 3, 5). Detunings, shifts and Rabi
/// frequencies are in the same bracketed units as DriveConfig, so the
/// Hamiltonian convention applies to them the same way.
struct FourLevelConfig {
  double delta21 = 0.0;
  double delta32 = 0.0;
  double delta54 = 0.0;
  double omega21 = 0.0;
  double omega32 = 0.0;
  double omega53 = 0.0;
  double level3_shift = 0.0;
  double level5_shift = 0.0;
  double k_prime_ratio = 0.0;
  /// Decay on the effective levels, including scattering through level 4.
  DecayModel decay;
  /// When set, four_level_model() re-eliminates level 4 at every velocity.
  std::optional<IntermediateLevel> intermediate;
  Convention convention = Convention::kLiteral;

  /// The elimination evaluated at velocity v (a copy of *this when
  /// `intermediate` is unset).
  FourLevelConfig at_velocity(double v) const;
};

/// Second-order elimination of level 4. Produces the effective 3-5 coupling,
/// the light shifts of levels 3 and 5 and the decay leaking through level 4.
/// Throws ValidityGate when |Delta43| < gate.
FourLevelConfig adiabatic_eliminate(const LevelScheme& scheme, const DriveConfig& drives,
                                    const DecayModel& decay, Convention convention,
                                    double gate = 100.0);

/// Chain Hamiltonian on (1, 2, 3, 5) with diagonal
/// (delta21, delta32 - v, shift3, delta54 + (k'/k1) v + shift5).
HamiltonianMatrix build_four_level_hamiltonian(const FourLevelConfig& cfg, double v);

/// Scan model for probe_scan over the effective four-level system.
ScanModel four_level_model(const FourLevelConfig& cfg);

/// One eigenvalue followed across velocities by eigenvector overlap.
struct EigenSweep {
  std::vector<double> velocities;
  /// Ascending eigenvalues per velocity.
  std::vector<std::vector<double>> eigenvalues;
  /// Index into eigenvalues[i] of the tracked state.
  std::vector<int> tracked_index;
  double min_overlap = 1.0;

  std::vector<double> tracked_values() const;
};

/// Tracks the coupling-field dark state. The probe ground level (index 0) is
/// removed first, since with a weak probe it only decouples; the seed at the
/// velocity nearest zero is the eigenvector with the most combined weight on
/// the probe excited level and the Rydberg level. Adjacent velocities are
/// linked by eigenvector overlap, bisecting the step while it is poor;
/// TrackingLost if it stays below 0.5.
EigenSweep track_dark_eigenvalue(const std::function<HamiltonianMatrix(double)>& hamiltonian_at,
                                 std::span<const double> velocities);

/// max - min of the tracked dark eigenvalue over the velocities.
double doppler_free_residual(const std::function<HamiltonianMatrix(double)>& hamiltonian_at,
                             std::span<const double> velocities);
double doppler_free_residual(const LevelScheme& scheme, const DriveConfig& drives,
                             Convention convention, std::span<const double> velocities);
double doppler_free_residual(const FourLevelConfig& cfg, std::span<const double> velocities);

/// |delta21| at the largest excursion from the baseline (mean of the two end
/// points). Ties go to the point nearest zero. Throws NoExtremum for a flat
/// spectrum.
double asymmetry_metric(const Spectrum& spectrum);

}  // namespace rydberg
