#pragma once

#include "rydberg/core.hpp"
#include "rydberg/doppler.hpp"
#include "rydberg/dynamics.hpp"
#include "rydberg/spectra.hpp"

namespace testing_support {

inline rydberg::LevelScheme fig3_scheme() { return rydberg::LevelScheme(780.24, 480.0, 26); }

inline rydberg::DriveConfig fig3_drives(bool rydberg_on) {
  rydberg::DriveConfig d;
  d.omega21 = 0.02;
  d.omega32 = 0.2;
  d.omega43 = 0.8;
  d.omega54 = rydberg_on ? 0.8 : 0.0;
  return d;
}

inline rydberg::DecayModel fig3_decay() { return rydberg::DecayModel::five_level(1.0, 0.01, 0.00635); }

inline rydberg::VelocityGrid fig3_grid() {
  return rydberg::make_grid(-10.0, 10.0, 0.5, rydberg::GridScheme::kUniform);
}

inline rydberg::DensityMatrix fig3_point(bool on, double v, double delta21) {
  auto d = fig3_drives(on);
  d.delta21 = delta21;
  auto h = rydberg::build_hamiltonian(fig3_scheme(), d, v);
  return rydberg::steady_state(rydberg::build_liouvillian(h, fig3_decay()));
}

inline double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace testing_support
