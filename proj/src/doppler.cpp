#include "rydberg/doppler.hpp"

#include <cmath>

#include "rydberg/errors.hpp"

namespace rydberg {

std::string to_string(GridScheme s) {
  return s == GridScheme::kUniform ? "uniform" : "maxwell";
}

GridScheme grid_scheme_from_string(const std::string& s) {
  if (s == "uniform") return GridScheme::kUniform;
  if (s == "maxwell") return GridScheme::kMaxwell;
  throw InvalidArgument("unknown grid scheme '" + s + "'");
}

VelocityGrid make_grid(double vmin, double vmax, double step, GridScheme scheme,
                       std::optional<double> doppler_width) {
  if (!std::isfinite(vmin) || !std::isfinite(vmax) || !std::isfinite(step)) {
    throw InvalidArgument("non-finite grid parameters");
  }
  if (vmin > vmax) throw InvalidArgument("grid needs vmin <= vmax");
  if (scheme == GridScheme::kMaxwell && !(doppler_width && *doppler_width > 0.0)) {
    throw InvalidArgument("maxwell weighting needs a positive doppler width");
  }

  VelocityGrid grid;
  grid.scheme = scheme;
  if (vmin == vmax) {
    grid.points = {vmin};
  } else {
    if (!(step > 0.0)) throw InvalidArgument("grid step must be positive");
    // Integer stepping keeps the points exact multiples of the step.
    const double span = (vmax - vmin) / step;
    const auto count = static_cast<long>(std::floor(span + 1e-9)) + 1;
    for (long i = 0; i < count; ++i) grid.points.push_back(vmin + static_cast<double>(i) * step);
  }
  if (grid.points.empty()) throw EmptyGrid("no velocity points fit the grid");

  const std::size_t n = grid.points.size();
  grid.weights.resize(n);
  if (scheme == GridScheme::kUniform) {
    for (auto& w : grid.weights) w = 1.0 / static_cast<double>(n);
  } else {
    const double width = *doppler_width;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = grid.points[i] / width;
      grid.weights[i] = std::exp(-x * x);
      total += grid.weights[i];
    }
    for (auto& w : grid.weights) w /= total;
  }
  return grid;
}

double doppler_average(std::span<const double> values, const VelocityGrid& grid) {
  if (values.size() != grid.size()) {
    throw LengthMismatch("doppler_average: " + std::to_string(values.size()) +
                         " values for " + std::to_string(grid.size()) + " velocities");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) sum += grid.weights[i] * values[i];
  return sum;
}

}  // namespace rydberg
