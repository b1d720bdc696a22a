#include "rydberg/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

#include "rydberg/errors.hpp"

namespace rydberg {

double DensityMatrix::hermiticity_error() const {
  return (entries - entries.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  const Eigen::MatrixXcd sym = 0.5 * (entries + entries.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

DensityMatrix DensityMatrix::pure(int levels, int level) {
  DensityMatrix rho;
  rho.entries = Eigen::MatrixXcd::Zero(levels, levels);
  rho.entries(level, level) = 1.0;
  return rho;
}

Eigen::VectorXcd DensityMatrix::vectorized() const {
  const int n = levels();
  Eigen::VectorXcd v(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) v(i * n + j) = entries(i, j);
  return v;
}

DensityMatrix DensityMatrix::from_vector(const Eigen::VectorXcd& v, int levels) {
  DensityMatrix rho;
  rho.entries.resize(levels, levels);
  for (int i = 0; i < levels; ++i)
    for (int j = 0; j < levels; ++j) rho.entries(i, j) = v(i * levels + j);
  return rho;
}

Liouvillian build_liouvillian(const HamiltonianMatrix& h, const DecayModel& decay) {
  decay.validate();
  const int n = h.levels();
  if (decay.levels() != n) {
    throw InvalidArgument("decay model has " + std::to_string(decay.levels()) +
                          " levels, Hamiltonian has " + std::to_string(n));
  }
  const int d = n * n;
  const Complex I(0.0, 1.0);
  Liouvillian L;
  L.levels = n;
  L.trace_preserving = decay.trace_preserving;
  L.matrix = Eigen::MatrixXcd::Zero(d, d);
  auto& M = L.matrix;

  // -i (H rho - rho H): row (i,j) picks up H(i,k) rho(k,j) - rho(i,k) H(k,j).
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int row = i * n + j;
      for (int k = 0; k < n; ++k) {
        if (h.entries(i, k) != 0.0) M(row, k * n + j) += -I * h.entries(i, k);
        if (h.entries(k, j) != 0.0) M(row, i * n + k) += I * h.entries(k, j);
      }
    }
  }

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int row = i * n + j;
      if (i == j) {
        M(row, row) -= decay.gamma[i];
      } else {
        M(row, row) -= 0.5 * (decay.gamma[i] + decay.gamma[j]) +
                       0.5 * (decay.dephasing[i] + decay.dephasing[j]) + decay.transit_rate;
      }
    }
  }

  if (decay.trace_preserving) {
    for (int src = 0; src < n; ++src) {
      if (decay.gamma[src] == 0.0) continue;
      for (int dst = 0; dst < n; ++dst) {
        const double w = decay.branching[src][dst];
        if (w != 0.0) M(dst * n + dst, src * n + src) += decay.gamma[src] * w;
      }
    }
  }

  // Transit relaxation of the ground populations toward an equal mixture.
  if (decay.transit_rate > 0.0 && !decay.ground_levels.empty()) {
    const double share = decay.transit_rate / static_cast<double>(decay.ground_levels.size());
    for (int g : decay.ground_levels) {
      M(g * n + g, g * n + g) -= decay.transit_rate;
      for (int g2 : decay.ground_levels) M(g * n + g, g2 * n + g2) += share;
    }
  }
  return L;
}

double residual_norm(const Liouvillian& L, const DensityMatrix& rho) {
  return (L.matrix * rho.vectorized()).cwiseAbs().maxCoeff();
}

namespace {

DensityMatrix hermitize(DensityMatrix rho) {
  rho.entries = 0.5 * (rho.entries + rho.entries.adjoint()).eval();
  return rho;
}

DensityMatrix lossy_steady_state(const Liouvillian& L) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(L.matrix, Eigen::ComputeFullV);
  const Eigen::VectorXcd x = svd.matrixV().col(svd.matrixV().cols() - 1);
  DensityMatrix rho = DensityMatrix::from_vector(x, L.levels);
  const Complex tr = rho.trace();
  if (std::abs(tr) == 0.0) throw NullSpaceDegenerate("lossy null vector has zero trace");
  rho.entries /= tr;
  return hermitize(rho);
}

}  // namespace

DensityMatrix steady_state(const Liouvillian& L, const SteadyStateOptions& opts) {
  if (!L.trace_preserving) return lossy_steady_state(L);

  const int n = L.levels;
  const int d = n * n;
  Eigen::MatrixXcd A = L.matrix;
  A.row(0).setZero();
  for (int i = 0; i < n; ++i) A(0, i * n + i) = 1.0;
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(d);
  b(0) = 1.0;

  Eigen::FullPivLU<Eigen::MatrixXcd> lu(A);
  lu.setThreshold(opts.degeneracy_tolerance);
  if (lu.rank() < d) {
    throw NullSpaceDegenerate("steady state is not unique (null space dimension " +
                              std::to_string(d - lu.rank() + 1) + ")");
  }
  Eigen::VectorXcd x = lu.solve(b);
  for (int s = 0; s < opts.refinement_steps; ++s) {
    const Eigen::VectorXcd r = b - A * x;
    x += lu.solve(r);
  }
  return hermitize(DensityMatrix::from_vector(x, n));
}

DensityMatrix propagate(const DensityMatrix& rho0, const Liouvillian& L, double t,
                        const PropagateOptions& opts) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("propagation time must be >= 0");
  if (rho0.levels() != L.levels) throw InvalidArgument("state and Liouvillian sizes differ");
  if (t == 0.0) return rho0;

  // Dormand-Prince 5(4) tableau.
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  (void)c2, (void)c3, (void)c4, (void)c5;

  const Eigen::MatrixXcd& M = L.matrix;
  Eigen::VectorXcd y = rho0.vectorized();
  Eigen::VectorXcd k1 = M * y, k2, k3, k4, k5, k6, k7, y_new;
  double now = 0.0;
  double h = std::min(opts.initial_step, t);
  long steps = 0;

  while (now < t) {
    if (++steps > opts.max_steps) throw StepSizeUnderflow("propagation exceeded max_steps");
    h = std::min(h, t - now);
    k2 = M * (y + h * (a21 * k1));
    k3 = M * (y + h * (a31 * k1 + a32 * k2));
    k4 = M * (y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    k5 = M * (y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    k6 = M * (y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    k7 = M * y_new;
    const double err =
        (h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7)).cwiseAbs().maxCoeff();
    const double allowed = opts.tolerance * h;
    if (err <= allowed) {
      now += h;
      y.swap(y_new);
      k1 = k7;  // first-same-as-last
    }
    const double factor =
        err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(allowed / err, 0.2), 0.2, 5.0);
    h *= factor;
    if (h < opts.min_step && now < t) {
      throw StepSizeUnderflow("step size fell below " + std::to_string(opts.min_step));
    }
  }
  return DensityMatrix::from_vector(y, L.levels);
}

}  // namespace rydberg
