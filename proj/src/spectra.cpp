#include "rydberg/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <optional>

#include "rydberg/errors.hpp"

namespace rydberg {

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Metadata describe(const DriveConfig& drives, const LevelScheme& scheme) {
  Metadata m = {
      {"lambda1_nm", format_number(scheme.lambda1_nm())},
      {"lambda2_nm", format_number(scheme.lambda2_nm())},
      {"n_principal", std::to_string(scheme.n_principal())},
      {"delta32", format_number(drives.delta32)},
      {"delta43", format_number(drives.delta43)},
      {"delta54", format_number(drives.delta54)},
      {"omega21", format_number(drives.omega21)},
      {"omega32", format_number(drives.omega32)},
      {"omega43", format_number(drives.omega43)},
      {"omega54", format_number(drives.omega54)},
      {"k_prime_ratio", format_number(drives.k_prime_ratio(scheme))},
  };
  return m;
}

Metadata describe(const DecayModel& decay) {
  auto join = [](const std::vector<double>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? " " : "") + format_number(xs[i]);
    return s;
  };
  Metadata m = {{"gamma", join(decay.gamma)}};
  for (int i = 0; i < decay.levels(); ++i) {
    if (decay.gamma[i] == 0.0) continue;
    std::string row;
    for (int j = 0; j < decay.levels(); ++j) {
      if (decay.branching[i][j] == 0.0) continue;
      row += (row.empty() ? "" : " ") + std::to_string(j + 1) + ":" +
             format_number(decay.branching[i][j]);
    }
    m.emplace_back("branch" + std::to_string(i + 1), row);
  }
  m.emplace_back("dephasing", join(decay.dephasing));
  m.emplace_back("transit_rate", format_number(decay.transit_rate));
  m.emplace_back("decay_mode", decay.trace_preserving ? "trace-preserving" : "literal-lossy");
  return m;
}

Metadata describe(const VelocityGrid& grid) {
  Metadata m = {{"grid_scheme", to_string(grid.scheme)},
                {"grid_points", std::to_string(grid.size())}};
  if (!grid.points.empty()) {
    m.emplace_back("grid_vmin", format_number(grid.points.front()));
    m.emplace_back("grid_vmax", format_number(grid.points.back()));
  }
  return m;
}

std::string to_string(Observable o) {
  return o == Observable::kImSigma21 ? "im_sigma21" : "re_sigma21";
}

Observable observable_from_string(const std::string& s) {
  if (s == "im_sigma21") return Observable::kImSigma21;
  if (s == "re_sigma21") return Observable::kReSigma21;
  throw InvalidArgument("unknown observable '" + s + "'");
}

void Spectrum::validate() const {
  if (axis.size() != values.size()) throw InvalidArgument("spectrum axis/value lengths differ");
  for (std::size_t i = 1; i < axis.size(); ++i) {
    if (!(axis[i] > axis[i - 1])) throw InvalidArgument("spectrum axis must be strictly increasing");
  }
}

ScanModel five_level_model(const LevelScheme& scheme, const DriveConfig& drives,
                           const DecayModel& decay, Convention convention) {
  drives.validate();
  decay.validate();
  ScanModel model;
  model.liouvillian = [scheme, drives, decay, convention](double v, double delta21) {
    DriveConfig d = drives;
    d.delta21 = delta21;
    return build_liouvillian(build_hamiltonian(scheme, d, v, convention), decay);
  };
  model.metadata = {{"model", "five-level"}, {"convention", to_string(convention)}};
  for (auto& kv : describe(drives, scheme)) model.metadata.push_back(kv);
  for (auto& kv : describe(decay)) model.metadata.push_back(kv);
  return model;
}

void Diagnostics::merge(const Diagnostics& o) {
  max_residual = std::max(max_residual, o.max_residual);
  max_trace_error = std::max(max_trace_error, o.max_trace_error);
  max_hermiticity_error = std::max(max_hermiticity_error, o.max_hermiticity_error);
  min_eigenvalue = std::min(min_eigenvalue, o.min_eigenvalue);
  points += o.points;
}

namespace {

double extract(const DensityMatrix& rho, Observable observable) {
  const Complex s = rho.sigma21();
  return observable == Observable::kImSigma21 ? s.imag() : s.real();
}

// Solves one point; returns the observable and fills `diag` when asked.
double solve_point(const ScanModel& model, double v, double d21, Observable observable,
                   const ScanOptions& options, Diagnostics* diag) {
  const Liouvillian L = model.liouvillian(v, d21);
  const DensityMatrix rho = steady_state(L, options.solver);
  if (diag) {
    diag->max_residual = std::max(diag->max_residual, residual_norm(L, rho));
    diag->max_trace_error = std::max(diag->max_trace_error, std::abs(rho.trace() - 1.0));
    diag->max_hermiticity_error = std::max(diag->max_hermiticity_error, rho.hermiticity_error());
    diag->min_eigenvalue = std::min(diag->min_eigenvalue, rho.min_eigenvalue());
    ++diag->points;
  }
  return extract(rho, observable);
}

void check_axis(const std::vector<double>& axis) {
  if (axis.empty()) throw InvalidArgument("scan axis is empty");
  for (std::size_t i = 1; i < axis.size(); ++i) {
    if (!(axis[i] > axis[i - 1])) throw InvalidArgument("scan axis must be strictly increasing");
  }
}

}  // namespace

GridValues scan_grid_serial(const ScanModel& model, const VelocityGrid& grid,
                            const std::vector<double>& axis, Observable observable,
                            const ScanOptions& options) {
  check_axis(axis);
  GridValues out;
  out.velocities = grid.size();
  out.detunings = axis.size();
  out.values.resize(out.velocities * out.detunings);
  Diagnostics* diag = options.diagnostics ? &out.diagnostics : nullptr;
  for (std::size_t iv = 0; iv < out.velocities; ++iv) {
    for (std::size_t id = 0; id < out.detunings; ++id) {
      const double v = grid.points[iv];
      const double d21 = axis[id];
      try {
        out.values[iv * out.detunings + id] =
            solve_point(model, v, d21, observable, options, diag);
      } catch (const Error& e) {
        throw SolverPointError(e.what(), v, d21);
      }
    }
  }
  return out;
}

GridValues scan_grid_parallel(const ScanModel& model, const VelocityGrid& grid,
                              const std::vector<double>& axis, Observable observable,
                              const ScanOptions& options) {
  check_axis(axis);
  GridValues out;
  out.velocities = grid.size();
  out.detunings = axis.size();
  const long total = static_cast<long>(out.velocities * out.detunings);
  out.values.resize(static_cast<std::size_t>(total));

  // Lowest failing index wins so the reported point is deterministic.
  long first_error = std::numeric_limits<long>::max();
  std::string first_message;

#pragma omp parallel
  {
    Diagnostics local;
    Diagnostics* diag = options.diagnostics ? &local : nullptr;
#pragma omp for schedule(dynamic, 16) nowait
    for (long k = 0; k < total; ++k) {
      const auto iv = static_cast<std::size_t>(k) / out.detunings;
      const auto id = static_cast<std::size_t>(k) % out.detunings;
      try {
        out.values[static_cast<std::size_t>(k)] =
            solve_point(model, grid.points[iv], axis[id], observable, options, diag);
      } catch (const std::exception& e) {
#pragma omp critical(rydberg_scan_error)
        if (k < first_error) {
          first_error = k;
          first_message = e.what();
        }
      }
    }
#pragma omp critical(rydberg_scan_merge)
    out.diagnostics.merge(local);
  }

  if (first_error != std::numeric_limits<long>::max()) {
    const auto iv = static_cast<std::size_t>(first_error) / out.detunings;
    const auto id = static_cast<std::size_t>(first_error) % out.detunings;
    throw SolverPointError(first_message, grid.points[iv], axis[id]);
  }
  if (!options.diagnostics) out.diagnostics = Diagnostics{};
  return out;
}

ScanResult probe_scan(const ScanModel& model, const VelocityGrid& grid,
                      const std::vector<double>& delta21_axis, Observable observable,
                      const ScanOptions& options) {
  if (grid.size() == 0) throw EmptyGrid("velocity grid is empty");
  const GridValues g = options.parallel
                           ? scan_grid_parallel(model, grid, delta21_axis, observable, options)
                           : scan_grid_serial(model, grid, delta21_axis, observable, options);

  Metadata base = model.metadata;
  for (auto& kv : describe(grid)) base.push_back(kv);
  base.emplace_back("observable", to_string(observable));

  ScanResult result;
  result.diagnostics = g.diagnostics;
  result.per_velocity.reserve(g.velocities);
  for (std::size_t iv = 0; iv < g.velocities; ++iv) {
    Spectrum s;
    s.axis_name = "delta21";
    s.value_name = to_string(observable);
    s.axis = delta21_axis;
    s.values.assign(g.values.begin() + static_cast<long>(iv * g.detunings),
                    g.values.begin() + static_cast<long>((iv + 1) * g.detunings));
    s.metadata = base;
    s.metadata.emplace_back("velocity", format_number(grid.points[iv]));
    result.per_velocity.push_back(std::move(s));
  }

  Spectrum& avg = result.averaged;
  avg.axis_name = "delta21";
  avg.value_name = to_string(observable);
  avg.axis = delta21_axis;
  avg.metadata = base;
  avg.metadata.emplace_back("velocity", "averaged");
  std::vector<double> column(g.velocities);
  for (std::size_t id = 0; id < g.detunings; ++id) {
    for (std::size_t iv = 0; iv < g.velocities; ++iv) column[iv] = g.at(iv, id);
    avg.values.push_back(doppler_average(column, grid));
  }
  return result;
}

Spectrum difference_spectrum(const Spectrum& on, const Spectrum& off) {
  if (on.axis_name != off.axis_name || on.axis != off.axis) {
    throw AxisMismatch("difference_spectrum: on/off axes differ");
  }
  if (on.values.size() != off.values.size()) throw AxisMismatch("on/off value lengths differ");
  Spectrum d;
  d.axis_name = on.axis_name;
  d.axis = on.axis;
  d.value_name = "delta_" + on.value_name + "_off_minus_on";
  d.values.resize(on.values.size());
  for (std::size_t i = 0; i < d.values.size(); ++i) d.values[i] = off.values[i] - on.values[i];
  for (const auto& [k, v] : on.metadata) d.metadata.emplace_back("on." + k, v);
  for (const auto& [k, v] : off.metadata) d.metadata.emplace_back("off." + k, v);
  return d;
}

Spectrum transmission(const Spectrum& absorption, double optical_depth_scale) {
  if (!(optical_depth_scale >= 0.0) || !std::isfinite(optical_depth_scale)) {
    throw InvalidArgument("optical depth scale must be finite and >= 0");
  }
  Spectrum t = absorption;
  t.value_name = "transmission";
  for (double& x : t.values) x = std::exp(-optical_depth_scale * x);
  t.metadata.emplace_back("optical_depth_scale", format_number(optical_depth_scale));
  return t;
}

std::vector<double> linear_axis(double lo, double hi, std::size_t n) {
  if (n == 0) throw InvalidArgument("axis needs at least one point");
  if (n == 1) return {lo};
  std::vector<double> axis(n);
  const auto m = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = static_cast<double>(i);
    axis[i] = (lo * (m - k) + hi * k) / m;
  }
  return axis;
}

}  // namespace rydberg
