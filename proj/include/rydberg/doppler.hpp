#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rydberg {

enum class GridScheme { kUniform, kMaxwell };

std::string to_string(GridScheme s);
GridScheme grid_scheme_from_string(const std::string& s);

/// Velocity classes (units gamma2/k1) with normalized weights.
struct VelocityGrid {
  std::vector<double> points;
  std::vector<double> weights;
  GridScheme scheme = GridScheme::kUniform;

  std::size_t size() const { return points.size(); }
};

/// Points vmin, vmin + step, ... up to vmax (inclusive within step/1e9).
/// Uniform weights are 1/N; maxwell weights are exp(-v^2/width^2) normalized
/// on the grid. vmin == vmax gives the single-point cold-atom grid.
VelocityGrid make_grid(double vmin, double vmax, double step, GridScheme scheme,
                       std::optional<double> doppler_width = std::nullopt);

/// Sum of w_i x_i, accumulated in grid order.
double doppler_average(std::span<const double> values, const VelocityGrid& grid);

}  // namespace rydberg
