#include "rydberg/analysis.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

#include "rydberg/errors.hpp"

namespace rydberg {

double effective_two_photon(double omega43, double omega54, double delta43) {
  if (delta43 == 0.0) throw DivisionByZeroDetuning("effective_two_photon needs delta43 != 0");
  return omega43 * omega54 / (2.0 * delta43);
}

double balance_omega53(double omega32, double k_prime_ratio) {
  if (!(k_prime_ratio > 0.0)) {
    throw NegativeRatio("balance condition needs k'/k1 > 0, got " + format_number(k_prime_ratio));
  }
  return omega32 * std::sqrt(k_prime_ratio);
}

namespace {

constexpr double kGoodOverlap = 0.9;
constexpr int kMaxDepth = 30;

double diag_scale(Convention c) { return c == Convention::kLiteral ? 0.5 : 1.0; }

// Five-level index of each effective level (1, 2, 3, 5).
constexpr int kSourceLevel[4] = {0, 1, 2, 4};

int effective_index(int five_level_index) {
  for (int k = 0; k < 4; ++k)
    if (kSourceLevel[k] == five_level_index) return k;
  return -1;
}

// Adds `rate` of extra decay out of effective level `k` distributed along the
// five-level branching row `row`; the part returning to `k` is dephasing.
void add_leak(DecayModel& d, int k, double rate, const std::vector<double>& row) {
  if (rate == 0.0) return;
  std::vector<double> flow(4, 0.0);
  double self = 0.0;
  for (int j = 0; j < static_cast<int>(row.size()); ++j) {
    const int e = effective_index(j);
    if (e < 0 || row[j] == 0.0) continue;
    if (e == k) {
      self += row[j];
    } else {
      flow[e] += row[j];
    }
  }
  d.dephasing[k] += rate * self;
  const double out = rate * (1.0 - self);
  if (out <= 0.0) return;
  const double total = d.gamma[k] + out;
  for (int j = 0; j < 4; ++j) {
    d.branching[k][j] = (d.gamma[k] * d.branching[k][j] + rate * flow[j]) / total;
  }
  d.gamma[k] = total;
}

// Fills the velocity-dependent fields of `cfg` by eliminating level 4 at v.
void eliminate_at(FourLevelConfig& cfg, const IntermediateLevel& mid,
                  const DecayModel& five_level_decay, double v) {
  const double f = diag_scale(cfg.convention);
  const double a = 0.5 * mid.omega43;
  const double b = 0.5 * mid.omega54;
  const double e4 = f * (mid.delta43 + v);
  const double e5 = f * (cfg.delta54 + cfg.k_prime_ratio * v);
  const double d3 = e4;
  const double d5 = e4 - e5;
  if (d3 == 0.0 || d5 == 0.0) throw DivisionByZeroDetuning("intermediate level is resonant");

  cfg.level3_shift = -a * a / d3 / f;
  cfg.level5_shift = -b * b / d5 / f;
  cfg.omega53 = a * b * (1.0 / d3 + 1.0 / d5);

  DecayModel d = five_level_decay.without_level(3);
  const auto& row4 = five_level_decay.branching[3];
  const double g4 = five_level_decay.gamma[3];
  add_leak(d, 2, g4 * (a / d3) * (a / d3), row4);
  add_leak(d, 3, g4 * (b / d5) * (b / d5), row4);
  cfg.decay = std::move(d);
}

}  // namespace

FourLevelConfig FourLevelConfig::at_velocity(double v) const {
  if (!intermediate) return *this;
  FourLevelConfig out = *this;
  eliminate_at(out, *intermediate, intermediate->five_level_decay, v);
  return out;
}

FourLevelConfig adiabatic_eliminate(const LevelScheme& scheme, const DriveConfig& drives,
                                    const DecayModel& decay, Convention convention,
                                    double gate) {
  drives.validate();
  decay.validate();
  if (decay.levels() != kLevels) throw InvalidArgument("elimination needs a five-level decay model");
  if (std::abs(drives.delta43) < gate) {
    throw ValidityGate("|delta43| = " + format_number(std::abs(drives.delta43)) +
                       " is below the elimination gate " + format_number(gate));
  }
  FourLevelConfig cfg;
  cfg.delta21 = drives.delta21;
  cfg.delta32 = drives.delta32;
  cfg.delta54 = drives.delta54;
  cfg.omega21 = drives.omega21;
  cfg.omega32 = drives.omega32;
  cfg.k_prime_ratio = drives.k_prime_ratio(scheme);
  cfg.convention = convention;
  cfg.intermediate = IntermediateLevel{drives.delta43, drives.omega43, drives.omega54, decay};
  eliminate_at(cfg, *cfg.intermediate, decay, 0.0);
  return cfg;
}

HamiltonianMatrix build_four_level_hamiltonian(const FourLevelConfig& cfg, double v) {
  return build_chain_hamiltonian(
      {cfg.delta21, cfg.delta32 - v, cfg.level3_shift,
       cfg.delta54 + cfg.k_prime_ratio * v + cfg.level5_shift},
      {cfg.omega21, cfg.omega32, cfg.omega53}, v, cfg.convention);
}

ScanModel four_level_model(const FourLevelConfig& cfg) {
  cfg.decay.validate();
  ScanModel model;
  model.liouvillian = [cfg](double v, double delta21) {
    FourLevelConfig at = cfg.at_velocity(v);
    at.delta21 = delta21;
    return build_liouvillian(build_four_level_hamiltonian(at, v), at.decay);
  };
  model.metadata = {
      {"model", cfg.intermediate ? "four-level-eliminated-velocity-resolved" : "four-level"},
      {"convention", to_string(cfg.convention)},
      {"delta32", format_number(cfg.delta32)},
      {"delta54", format_number(cfg.delta54)},
      {"omega21", format_number(cfg.omega21)},
      {"omega32", format_number(cfg.omega32)},
      {"omega53", format_number(cfg.omega53)},
      {"level3_shift", format_number(cfg.level3_shift)},
      {"level5_shift", format_number(cfg.level5_shift)},
      {"k_prime_ratio", format_number(cfg.k_prime_ratio)},
  };
  for (auto& kv : describe(cfg.decay)) model.metadata.push_back(kv);
  return model;
}

std::vector<double> EigenSweep::tracked_values() const {
  std::vector<double> out(velocities.size());
  for (std::size_t i = 0; i < velocities.size(); ++i) out[i] = eigenvalues[i][tracked_index[i]];
  return out;
}

EigenSweep track_dark_eigenvalue(const std::function<HamiltonianMatrix(double)>& hamiltonian_at,
                                 std::span<const double> velocities) {
  if (velocities.empty()) throw EmptyGrid("eigenvalue sweep needs at least one velocity");
  for (std::size_t i = 1; i < velocities.size(); ++i) {
    if (!(velocities[i] > velocities[i - 1])) throw InvalidArgument("velocities must increase");
  }
  const std::size_t count = velocities.size();
  std::vector<Eigen::MatrixXd> vectors(count);
  EigenSweep sweep;
  sweep.velocities.assign(velocities.begin(), velocities.end());
  sweep.eigenvalues.resize(count);
  sweep.tracked_index.assign(count, -1);

  for (std::size_t i = 0; i < count; ++i) {
    const HamiltonianMatrix h = hamiltonian_at(velocities[i]).without_level(0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.entries);
    const Eigen::VectorXd& w = es.eigenvalues();
    sweep.eigenvalues[i].assign(w.data(), w.data() + w.size());
    vectors[i] = es.eigenvectors();
  }

  // Seed: the state with most weight on the probe excited level and the
  // Rydberg level, i.e. the one dark to the shared ground level.
  std::size_t seed = 0;
  for (std::size_t i = 1; i < count; ++i) {
    if (std::abs(velocities[i]) < std::abs(velocities[seed])) seed = i;
  }
  {
    const Eigen::MatrixXd& U = vectors[seed];
    const Eigen::Index last = U.rows() - 1;
    int best = 0;
    double best_weight = -1.0;
    for (Eigen::Index k = 0; k < U.cols(); ++k) {
      const double wgt = U(0, k) * U(0, k) + U(last, k) * U(last, k);
      if (wgt > best_weight) {
        best_weight = wgt;
        best = static_cast<int>(k);
      }
    }
    sweep.tracked_index[seed] = best;
  }

  auto eigvecs = [&](double v) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hamiltonian_at(v).without_level(0).entries);
    return Eigen::MatrixXd(es.eigenvectors());
  };
  // Follows `vec` from v0 to v1, bisecting the interval while the overlap is
  // poor. Returns the matched column of `target` (the eigenvectors at v1).
  std::function<Eigen::Index(const Eigen::VectorXd&, double, double, const Eigen::MatrixXd&, int,
                             Eigen::VectorXd&)>
      follow = [&](const Eigen::VectorXd& vec, double v0, double v1, const Eigen::MatrixXd& target,
                   int depth, Eigen::VectorXd& matched) -> Eigen::Index {
    const Eigen::VectorXd overlaps = (target.transpose() * vec).cwiseAbs2();
    Eigen::Index best = 0;
    const double ov = overlaps.maxCoeff(&best);
    if (ov >= kGoodOverlap || depth == kMaxDepth) {
      if (ov < 0.5) {
        throw TrackingLost("dark-state overlap " + format_number(ov) + " between v=" +
                           format_number(v0) + " and v=" + format_number(v1));
      }
      sweep.min_overlap = std::min(sweep.min_overlap, ov);
      matched = target.col(best);
      return best;
    }
    const double mid = 0.5 * (v0 + v1);
    Eigen::VectorXd at_mid;
    follow(vec, v0, mid, eigvecs(mid), depth + 1, at_mid);
    return follow(at_mid, mid, v1, target, depth + 1, matched);
  };
  auto step = [&](std::size_t from, std::size_t to) {
    Eigen::VectorXd matched;
    const Eigen::VectorXd prev = vectors[from].col(sweep.tracked_index[from]);
    sweep.tracked_index[to] =
        static_cast<int>(follow(prev, velocities[from], velocities[to], vectors[to], 0, matched));
  };
  for (std::size_t i = seed + 1; i < count; ++i) step(i - 1, i);
  for (std::size_t i = seed; i-- > 0;) step(i + 1, i);
  return sweep;
}

double doppler_free_residual(const std::function<HamiltonianMatrix(double)>& hamiltonian_at,
                             std::span<const double> velocities) {
  const std::vector<double> values = track_dark_eigenvalue(hamiltonian_at, velocities).tracked_values();
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi - *lo;
}

double doppler_free_residual(const LevelScheme& scheme, const DriveConfig& drives,
                             Convention convention, std::span<const double> velocities) {
  return doppler_free_residual(
      [&](double v) { return build_hamiltonian(scheme, drives, v, convention); }, velocities);
}

double doppler_free_residual(const FourLevelConfig& cfg, std::span<const double> velocities) {
  return doppler_free_residual(
      [&](double v) { return build_four_level_hamiltonian(cfg.at_velocity(v), v); }, velocities);
}

double asymmetry_metric(const Spectrum& spectrum) {
  spectrum.validate();
  if (spectrum.size() < 3) throw NoExtremum("spectrum too short for an extremum");
  const double baseline = 0.5 * (spectrum.values.front() + spectrum.values.back());
  double best = 0.0;
  for (double x : spectrum.values) best = std::max(best, std::abs(x - baseline));
  if (best == 0.0) throw NoExtremum("spectrum is flat");
  double where = 0.0;
  bool found = false;
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    const double dev = std::abs(spectrum.values[i] - baseline);
    if (dev >= best * (1.0 - 1e-12)) {
      const double a = std::abs(spectrum.axis[i]);
      if (!found || a < where) where = a;
      found = true;
    }
  }
  return where;
}

}  // namespace rydberg
