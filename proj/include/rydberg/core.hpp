#pragma once

// Domain types and the velocity-parameterized five-level Hamiltonian.
//
// Units: every frequency is in units of the probe excited-state decay rate
// gamma2 (so gamma2 == 1). Velocities are in units of gamma2/k1, which makes
// the Doppler shift k1*v numerically equal to v.

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace rydberg {

inline constexpr int kLevels = 5;

/// How the bracketed chain matrix is turned into Hamiltonian entries.
enum class Convention {
  kLiteral,   ///< global 1/2 prefactor on the whole bracketed matrix
  kStandard,  ///< detunings undivided on the diagonal, Omega/2 off-diagonal
};

std::string to_string(Convention c);
Convention convention_from_string(const std::string& s);

/// Static atomic and optical constants of the ladder.
class LevelScheme {
 public:
  LevelScheme() : LevelScheme(780.24, 480.0, 44) {}
  LevelScheme(double lambda1_nm, double lambda2_nm, int n_principal);

  double lambda1_nm() const { return lambda1_nm_; }
  double lambda2_nm() const { return lambda2_nm_; }
  int n_principal() const { return n_principal_; }

  /// Wavevectors in rad/nm.
  double k1() const { return k1_; }
  double k2() const { return k2_; }
  /// Signed k' = k1 - k2 (negative for 780/480 nm).
  double k_prime() const { return k_prime_; }
  double k_prime_ratio() const { return k_prime_ / k1_; }

  const std::array<std::string, kLevels>& level_labels() const { return labels_; }

 private:
  double lambda1_nm_;
  double lambda2_nm_;
  int n_principal_;
  double k1_;
  double k2_;
  double k_prime_;
  std::array<std::string, kLevels> labels_;
};

/// Laser detunings and Rabi frequencies, all in gamma2.
struct DriveConfig {
  double delta21 = 0.0;
  double delta32 = 0.0;
  double delta43 = 0.0;
  double delta54 = 0.0;
  double omega21 = 0.0;
  double omega32 = 0.0;
  double omega43 = 0.0;
  double omega54 = 0.0;
  /// Replaces the physical k'/k1 when set.
  std::optional<double> override_k_prime_ratio;

  /// Throws InvalidArgument on non-finite values or negative Rabi frequencies.
  void validate() const;
  double k_prime_ratio(const LevelScheme& scheme) const;

  bool operator==(const DriveConfig&) const = default;
};

/// Population/coherence decay rules.
///
/// Population of level i decays at gamma[i]; a coherence (i, j) decays at
/// (gamma[i] + gamma[j]) / 2 plus (dephasing[i] + dephasing[j]) / 2 plus the
/// transit rate. In trace-preserving mode population lost from level i is
/// returned according to row i of `branching`. The transit rate also relaxes
/// the ground-level populations toward an equal mixture.
struct DecayModel {
  std::vector<double> gamma;
  /// branching[i][j]: fraction of level i's decay landing in level j.
  std::vector<std::vector<double>> branching;
  std::vector<double> dephasing;
  double transit_rate = 0.0;
  std::vector<int> ground_levels;
  bool trace_preserving = true;

  int levels() const { return static_cast<int>(gamma.size()); }
  void validate() const;

  /// Five-level defaults: 2 -> {1: 1/2, 3: 1/2}, 4 -> 3, 5 -> 3, gamma2 = 1,
  /// gamma1 = gamma3 = 0, ground levels {1, 3} (0-based {0, 2}).
  static DecayModel five_level(double gamma4 = 1.0, double gamma5 = 0.01,
                               double transit_rate = 0.0);

  /// Drops a level; decay that would have landed in it is forwarded along
  /// its own branching row.
  DecayModel without_level(int level) const;

  bool operator==(const DecayModel&) const = default;
};

/// Real symmetric Hamiltonian at a fixed velocity.
struct HamiltonianMatrix {
  Eigen::MatrixXd entries;
  double velocity = 0.0;
  Convention convention = Convention::kLiteral;

  int levels() const { return static_cast<int>(entries.rows()); }
  /// Removes one level's row and column.
  HamiltonianMatrix without_level(int level) const;
};

/// Builds the five-level Hamiltonian at velocity v. The diagonal is
/// (delta21, delta32 - v, 0, delta43 + v, delta54 + (k'/k1) v) and the chain
/// couplings sit on the first off-diagonal.
HamiltonianMatrix build_hamiltonian(const LevelScheme& scheme,
                                    const DriveConfig& drives, double v,
                                    Convention convention = Convention::kLiteral);

/// Generic tridiagonal chain builder shared by the five-level and effective
/// models: `diagonal` holds the bracketed detunings, `couplings` the Rabi
/// frequencies between neighbours.
HamiltonianMatrix build_chain_hamiltonian(const std::vector<double>& diagonal,
                                          const std::vector<double>& couplings,
                                          double v, Convention convention);

}  // namespace rydberg
