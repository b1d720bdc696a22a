#include "rydberg/core.hpp"

#include <cmath>
#include <numbers>

#include "rydberg/errors.hpp"

namespace rydberg {

namespace {

void require_finite(double x, const char* name) {
  if (!std::isfinite(x)) {
    throw InvalidArgument(std::string("non-finite value for ") + name);
  }
}

}  // namespace

std::string to_string(Convention c) {
  switch (c) {
    case Convention::kLiteral:
      return "literal";
    case Convention::kStandard:
      return "standard";
  }
  throw InvalidArgument("unknown convention");
}

Convention convention_from_string(const std::string& s) {
  if (s == "literal") return Convention::kLiteral;
  if (s == "standard") return Convention::kStandard;
  throw InvalidArgument("unknown convention '" + s + "'");
}

LevelScheme::LevelScheme(double lambda1_nm, double lambda2_nm, int n_principal)
    : lambda1_nm_(lambda1_nm),
      lambda2_nm_(lambda2_nm),
      n_principal_(n_principal),
      labels_{"5s1/2 F=1", "5p3/2 F'=2", "5s1/2 F=2", "5p3/2 F'=3",
              std::to_string(n_principal) + "d5/2"} {
  require_finite(lambda1_nm, "lambda1");
  require_finite(lambda2_nm, "lambda2");
  if (lambda1_nm <= 0.0 || lambda2_nm <= 0.0) {
    throw InvalidArgument("wavelengths must be positive");
  }
  if (n_principal <= 0) throw InvalidArgument("principal quantum number must be positive");
  k1_ = 2.0 * std::numbers::pi / lambda1_nm;
  k2_ = 2.0 * std::numbers::pi / lambda2_nm;
  k_prime_ = k1_ - k2_;
}

void DriveConfig::validate() const {
  require_finite(delta21, "delta21");
  require_finite(delta32, "delta32");
  require_finite(delta43, "delta43");
  require_finite(delta54, "delta54");
  require_finite(omega21, "omega21");
  require_finite(omega32, "omega32");
  require_finite(omega43, "omega43");
  require_finite(omega54, "omega54");
  if (override_k_prime_ratio) require_finite(*override_k_prime_ratio, "k_prime_ratio");
  if (omega21 < 0 || omega32 < 0 || omega43 < 0 || omega54 < 0) {
    throw InvalidArgument("Rabi frequencies must be non-negative");
  }
}

double DriveConfig::k_prime_ratio(const LevelScheme& scheme) const {
  return override_k_prime_ratio.value_or(scheme.k_prime_ratio());
}

void DecayModel::validate() const {
  const auto n = gamma.size();
  if (n < 2) throw InvalidArgument("decay model needs at least two levels");
  if (branching.size() != n || dephasing.size() != n) {
    throw InvalidArgument("decay model arrays disagree on the number of levels");
  }
  require_finite(transit_rate, "transit_rate");
  if (transit_rate < 0) throw InvalidArgument("transit rate must be non-negative");
  for (std::size_t i = 0; i < n; ++i) {
    require_finite(gamma[i], "gamma");
    require_finite(dephasing[i], "dephasing");
    if (gamma[i] < 0 || dephasing[i] < 0) throw InvalidArgument("decay rates must be non-negative");
    if (branching[i].size() != n) throw InvalidArgument("branching row has wrong length");
    if (gamma[i] == 0.0) continue;
    double sum = 0.0;
    for (double w : branching[i]) {
      require_finite(w, "branching");
      if (w < 0) throw InvalidArgument("branching weights must be non-negative");
      sum += w;
    }
    if (trace_preserving && std::abs(sum - 1.0) > 1e-12) {
      throw InvalidArgument("branching row " + std::to_string(i + 1) + " sums to " +
                            std::to_string(sum));
    }
    if (branching[i][i] == 1.0) {
      throw InvalidArgument("level " + std::to_string(i + 1) +
                            " decays only into itself (no-op decay)");
    }
  }
  for (int g : ground_levels) {
    if (g < 0 || static_cast<std::size_t>(g) >= n) throw InvalidArgument("ground level out of range");
  }
}

DecayModel DecayModel::five_level(double gamma4, double gamma5, double transit_rate) {
  DecayModel d;
  d.gamma = {0.0, 1.0, 0.0, gamma4, gamma5};
  d.branching.assign(kLevels, std::vector<double>(kLevels, 0.0));
  d.branching[1][0] = 0.5;
  d.branching[1][2] = 0.5;
  d.branching[3][2] = 1.0;
  d.branching[4][2] = 1.0;
  d.dephasing.assign(kLevels, 0.0);
  d.transit_rate = transit_rate;
  d.ground_levels = {0, 2};
  return d;
}

DecayModel DecayModel::without_level(int level) const {
  const int n = levels();
  if (level < 0 || level >= n) throw InvalidArgument("level out of range");
  DecayModel out;
  out.transit_rate = transit_rate;
  out.trace_preserving = trace_preserving;
  for (int i = 0; i < n; ++i) {
    if (i == level) continue;
    out.gamma.push_back(gamma[i]);
    out.dephasing.push_back(dephasing[i]);
    std::vector<double> row;
    for (int j = 0; j < n; ++j) {
      if (j == level) continue;
      double w = branching[i][j];
      // Forward decay into the removed level along that level's own row.
      if (branching[i][level] > 0.0) {
        const double denom = 1.0 - branching[level][level];
        if (denom > 0.0) w += branching[i][level] * branching[level][j] / denom;
      }
      row.push_back(w);
    }
    out.branching.push_back(std::move(row));
  }
  for (int g : ground_levels) {
    if (g == level) continue;
    out.ground_levels.push_back(g > level ? g - 1 : g);
  }
  return out;
}

HamiltonianMatrix HamiltonianMatrix::without_level(int level) const {
  const int n = levels();
  if (level < 0 || level >= n) throw InvalidArgument("level out of range");
  HamiltonianMatrix out;
  out.velocity = velocity;
  out.convention = convention;
  out.entries.resize(n - 1, n - 1);
  for (int i = 0, r = 0; i < n; ++i) {
    if (i == level) continue;
    for (int j = 0, c = 0; j < n; ++j) {
      if (j == level) continue;
      out.entries(r, c++) = entries(i, j);
    }
    ++r;
  }
  return out;
}

HamiltonianMatrix build_chain_hamiltonian(const std::vector<double>& diagonal,
                                          const std::vector<double>& couplings,
                                          double v, Convention convention) {
  const auto n = static_cast<Eigen::Index>(diagonal.size());
  if (couplings.size() + 1 != diagonal.size()) {
    throw InvalidArgument("chain Hamiltonian needs n-1 couplings");
  }
  for (double x : diagonal) require_finite(x, "diagonal");
  for (double x : couplings) require_finite(x, "coupling");
  require_finite(v, "velocity");

  HamiltonianMatrix h;
  h.velocity = v;
  h.convention = convention;
  h.entries = Eigen::MatrixXd::Zero(n, n);
  double diag_scale = 0.0;
  switch (convention) {
    case Convention::kLiteral:
      diag_scale = 0.5;
      break;
    case Convention::kStandard:
      diag_scale = 1.0;
      break;
    default:
      throw InvalidArgument("unknown convention");
  }
  for (Eigen::Index i = 0; i < n; ++i) h.entries(i, i) = diag_scale * diagonal[i];
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    h.entries(i, i + 1) = 0.5 * couplings[i];
    h.entries(i + 1, i) = 0.5 * couplings[i];
  }
  return h;
}

HamiltonianMatrix build_hamiltonian(const LevelScheme& scheme, const DriveConfig& drives,
                                    double v, Convention convention) {
  drives.validate();
  const double kr = drives.k_prime_ratio(scheme);
  return build_chain_hamiltonian(
      {drives.delta21, drives.delta32 - v, 0.0, drives.delta43 + v, drives.delta54 + kr * v},
      {drives.omega21, drives.omega32, drives.omega43, drives.omega54}, v, convention);
}

}  // namespace rydberg
