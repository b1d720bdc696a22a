#pragma once

// Liouvillian assembly, steady-state solve and a time-propagation oracle.
//
// Density matrices are vectorized row-major: element (i, j) of an n-level
// rho sits at index i * n + j.

#include <Eigen/Dense>

#include <complex>

#include "rydberg/core.hpp"

namespace rydberg {

using Complex = std::complex<double>;

struct DensityMatrix {
  Eigen::MatrixXcd entries;

  int levels() const { return static_cast<int>(entries.rows()); }
  double population(int level) const { return entries(level, level).real(); }
  Complex trace() const { return entries.trace(); }

  /// Probe coherence, oriented so that Im(sigma21) > 0 means absorption for
  /// the Hamiltonian sign used here (i.e. rho(1,2) in zero-based (0,1)).
  Complex sigma21() const { return entries(0, 1); }

  /// Largest |rho - rho^dagger| entry.
  double hermiticity_error() const;
  double min_eigenvalue() const;

  static DensityMatrix pure(int levels, int level);
  Eigen::VectorXcd vectorized() const;
  static DensityMatrix from_vector(const Eigen::VectorXcd& v, int levels);
};

struct Liouvillian {
  Eigen::MatrixXcd matrix;
  bool trace_preserving = true;
  int levels = 0;
};

/// -i[H, rho] plus the diagonal decay rule of `decay`.
Liouvillian build_liouvillian(const HamiltonianMatrix& h, const DecayModel& decay);

/// Largest |(L rho)_k|.
double residual_norm(const Liouvillian& L, const DensityMatrix& rho);

struct SteadyStateOptions {
  /// Relative pivot threshold below which the bordered system counts as
  /// rank deficient (a null space of dimension > 1).
  double degeneracy_tolerance = 1e-8;
  int refinement_steps = 2;
};

/// Null vector of L with unit trace. The trace condition replaces the first
/// population row. Throws NullSpaceDegenerate if the steady state is not
/// unique. Non-trace-preserving models fall back to the smallest right
/// singular vector, renormalized to unit trace (experimental).
DensityMatrix steady_state(const Liouvillian& L, const SteadyStateOptions& opts = {});

struct PropagateOptions {
  /// Error-per-unit-time target for each accepted step.
  double tolerance = 1e-10;
  double initial_step = 1e-2;
  double min_step = 1e-12;
  long max_steps = 50'000'000;
};

/// rho(t) = exp(L t) rho0 by adaptive Dormand-Prince 5(4) integration.
DensityMatrix propagate(const DensityMatrix& rho0, const Liouvillian& L, double t,
                        const PropagateOptions& opts = {});

}  // namespace rydberg
