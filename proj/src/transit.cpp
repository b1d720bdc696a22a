#include "rydberg/transit.hpp"

#include <cmath>
#include <numbers>

#include "rydberg/errors.hpp"

namespace rydberg {

namespace {
constexpr double kBoltzmann = 1.380649e-23;
constexpr double kAtomicMassUnit = 1.66053906660e-27;
}  // namespace

TransitEstimate transit_linewidth(const BeamGeometry& geom, double constant, double gamma2_hz) {
  for (double x : {geom.waist_mm, geom.temperature_k, geom.atomic_mass_amu, constant, gamma2_hz}) {
    if (!(x > 0.0) || std::isnan(x)) throw InvalidArgument("transit inputs must be positive");
  }
  TransitEstimate t;
  const double mass = geom.atomic_mass_amu * kAtomicMassUnit;
  t.mean_speed_m_s = std::sqrt(8.0 * kBoltzmann * geom.temperature_k / (std::numbers::pi * mass));
  const double fwhm_hz = constant * t.mean_speed_m_s / (2.0 * std::numbers::pi * geom.waist_mm * 1e-3);
  t.fwhm_khz = fwhm_hz * 1e-3;
  t.transit_rate = fwhm_hz / (2.0 * gamma2_hz);
  return t;
}

}  // namespace rydberg
