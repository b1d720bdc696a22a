#pragma once

// Transit-time linewidth of thermal atoms crossing a Gaussian beam.

namespace rydberg {

struct BeamGeometry {
  double waist_mm = 1.3;  ///< 1/e^2 intensity radius
  double temperature_k = 293.0;
  double atomic_mass_amu = 86.909180527;  ///< Rb-87
};

/// 2 sqrt(2 ln 2), the Gaussian FWHM-to-sigma factor, used as the order-one
/// constant C below.
inline constexpr double kGaussianTransitConstant = 2.3548200450309493;

struct TransitEstimate {
  double mean_speed_m_s = 0.0;
  double fwhm_khz = 0.0;
  /// Coherence dephasing rate (gamma2 units) giving a Lorentzian of this FWHM.
  double transit_rate = 0.0;
};

/// FWHM = C vbar / (2 pi w), vbar = sqrt(8 kB T / (pi m)). The rate is
/// FWHM / (2 gamma2) with gamma2 given as a linewidth in Hz. Throws
/// InvalidArgument for non-positive inputs.
TransitEstimate transit_linewidth(const BeamGeometry& geom, double constant = kGaussianTransitConstant,
                                  double gamma2_hz = 6.0666e6);

}  // namespace rydberg
