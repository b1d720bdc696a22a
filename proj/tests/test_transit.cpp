#include "doctest.h"

#include <cmath>
#include <limits>

#include "rydberg/errors.hpp"
#include "rydberg/transit.hpp"

using namespace rydberg;

TEST_CASE("rubidium cell estimate") {
  auto e = transit_linewidth(BeamGeometry{});
  CHECK(e.mean_speed_m_s == doctest::Approx(267.2).epsilon(1e-3));
  CHECK(e.fwhm_khz == doctest::Approx(77.0).epsilon(1e-3));
  CHECK(e.fwhm_khz > 35.0);
  CHECK(e.fwhm_khz < 140.0);
  CHECK(e.transit_rate == doctest::Approx(e.fwhm_khz * 1e3 / (2.0 * 6.0666e6)).epsilon(1e-14));

  auto plain = transit_linewidth(BeamGeometry{}, 1.0);
  CHECK(plain.fwhm_khz == doctest::Approx(e.fwhm_khz / kGaussianTransitConstant).epsilon(1e-14));
}

TEST_CASE("linewidth scaling") {
  BeamGeometry g;
  const double base = transit_linewidth(g).fwhm_khz;
  g.waist_mm = 2.6;
  CHECK(transit_linewidth(g).fwhm_khz == doctest::Approx(base / 2.0).epsilon(1e-14));
  g.waist_mm = 1e12;
  CHECK(transit_linewidth(g).fwhm_khz < 1e-9);
  g = BeamGeometry{};
  g.temperature_k = 4.0 * 293.0;
  CHECK(transit_linewidth(g).fwhm_khz == doctest::Approx(2.0 * base).epsilon(1e-14));
  g = BeamGeometry{};
  g.atomic_mass_amu = 4.0 * g.atomic_mass_amu;
  CHECK(transit_linewidth(g).fwhm_khz == doctest::Approx(base / 2.0).epsilon(1e-14));
}

TEST_CASE("transit input validation") {
  BeamGeometry g;
  g.waist_mm = 0.0;
  CHECK_THROWS_AS(transit_linewidth(g), InvalidArgument);
  g = BeamGeometry{};
  g.temperature_k = -1.0;
  CHECK_THROWS_AS(transit_linewidth(g), InvalidArgument);
  g = BeamGeometry{};
  g.atomic_mass_amu = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(transit_linewidth(g), InvalidArgument);
  CHECK_THROWS_AS(transit_linewidth(BeamGeometry{}, 0.0), InvalidArgument);
  CHECK_THROWS_AS(transit_linewidth(BeamGeometry{}, 1.0, -5.0), InvalidArgument);
}
