#include "doctest.h"

#include <cmath>
#include <random>

#include "rydberg/dynamics.hpp"
#include "rydberg/errors.hpp"
#include "support.hpp"

using namespace rydberg;
using testing_support::fig3_decay;
using testing_support::fig3_drives;
using testing_support::fig3_point;
using testing_support::fig3_scheme;
using testing_support::max_abs_diff;

namespace {

DecayModel three_level_lambda() {
  DecayModel d;
  d.gamma = {0.0, 1.0, 0.0};
  d.branching = {{0, 0, 0}, {0.5, 0, 0.5}, {0, 0, 0}};
  d.dephasing = {0, 0, 0};
  d.ground_levels = {0, 2};
  return d;
}

DecayModel closed(int n) {
  DecayModel d;
  d.gamma.assign(n, 0.0);
  d.branching.assign(n, std::vector<double>(n, 0.0));
  d.dephasing.assign(n, 0.0);
  return d;
}

// Sum over the population rows of L: zero for a trace-preserving generator.
double trace_functional_error(const Liouvillian& L) {
  const int n = L.levels;
  Eigen::RowVectorXcd t = Eigen::RowVectorXcd::Zero(n * n);
  for (int i = 0; i < n; ++i) t += L.matrix.row(i * n + i);
  return t.cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("row-major vectorization round trip") {
  DensityMatrix r;
  r.entries = Eigen::MatrixXcd::Zero(3, 3);
  r.entries(0, 1) = Complex(1.0, 2.0);
  auto v = r.vectorized();
  CHECK(v(1) == Complex(1.0, 2.0));
  CHECK(DensityMatrix::from_vector(v, 3).entries == r.entries);
}

TEST_CASE("pure decay splits the excited population evenly") {
  HamiltonianMatrix h;
  h.entries = Eigen::MatrixXd::Zero(3, 3);
  auto L = build_liouvillian(h, three_level_lambda());
  auto rho = propagate(DensityMatrix::pure(3, 1), L, 60.0);
  CHECK(rho.population(0) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(rho.population(2) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(std::abs(rho.population(1)) < 1e-9);
}

TEST_CASE("coherences decay at the mean of the level rates") {
  HamiltonianMatrix h;
  h.entries = Eigen::MatrixXd::Zero(3, 3);
  auto L = build_liouvillian(h, three_level_lambda());
  DensityMatrix rho;
  rho.entries = Eigen::MatrixXcd::Zero(3, 3);
  rho.entries(0, 1) = 1.0;
  Eigen::VectorXcd d = L.matrix * rho.vectorized();
  CHECK(d(1).real() == doctest::Approx(-0.5));
}

TEST_CASE("trace functional vanishes for trace-preserving models") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    DriveConfig d = fig3_drives(trial % 2 == 0);
    d.delta21 = u(rng);
    d.delta54 = u(rng);
    auto decay = DecayModel::five_level(1.0, 0.01, 0.01 * (trial % 3));
    auto L = build_liouvillian(build_hamiltonian(fig3_scheme(), d, u(rng)), decay);
    CHECK(L.trace_preserving);
    CHECK(trace_functional_error(L) < 1e-12);
  }
}

TEST_CASE("closed system conserves trace hermiticity and purity") {
  DriveConfig d = fig3_drives(true);
  d.omega21 = 0.7;
  d.delta21 = 0.3;
  auto L = build_liouvillian(build_hamiltonian(fig3_scheme(), d, 1.0), closed(5));
  CHECK((L.matrix + L.matrix.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
  auto rho = propagate(DensityMatrix::pure(5, 0), L, 50.0);
  CHECK(std::abs(rho.trace() - 1.0) < 1e-9);
  CHECK(rho.hermiticity_error() < 1e-9);
  const Complex purity = (rho.entries * rho.entries).trace();
  CHECK(std::abs(purity - 1.0) < 1e-8);
}

TEST_CASE("propagate for zero time is the identity") {
  auto L = build_liouvillian(build_hamiltonian(fig3_scheme(), fig3_drives(true), 0.0), fig3_decay());
  auto rho0 = fig3_point(true, 1.0, 0.2);
  CHECK(propagate(rho0, L, 0.0).entries == rho0.entries);
  CHECK_THROWS_AS(propagate(rho0, L, -1.0), InvalidArgument);
  CHECK_THROWS_AS(propagate(DensityMatrix::pure(3, 0), L, 1.0), InvalidArgument);
}

TEST_CASE("step size underflow is reported") {
  auto L = build_liouvillian(build_hamiltonian(fig3_scheme(), fig3_drives(true), 0.0), fig3_decay());
  PropagateOptions o;
  o.max_steps = 3;
  CHECK_THROWS_AS(propagate(DensityMatrix::pure(5, 0), L, 100.0, o), StepSizeUnderflow);
  o = PropagateOptions{};
  o.tolerance = 1e-30;
  o.min_step = 1e-3;
  CHECK_THROWS_AS(propagate(DensityMatrix::pure(5, 0), L, 100.0, o), StepSizeUnderflow);
}

TEST_CASE("fig3 steady states are physical") {
  for (bool on : {false, true}) {
    for (double v : {-10.0, -0.5, 0.0, 3.0}) {
      for (double d21 : {-3.0, -0.1, 0.0, 0.7}) {
        auto dr = fig3_drives(on);
        dr.delta21 = d21;
        auto L = build_liouvillian(build_hamiltonian(fig3_scheme(), dr, v), fig3_decay());
        auto rho = steady_state(L);
        CHECK(residual_norm(L, rho) < 1e-10);
        CHECK(std::abs(rho.trace() - 1.0) < 1e-10);
        CHECK(rho.hermiticity_error() < 1e-10);
        CHECK(rho.min_eigenvalue() > -1e-8);
      }
    }
  }
}

TEST_CASE("off configuration leaves level 5 empty") {
  for (double v : {-2.0, 0.0, 0.5}) {
    auto rho = fig3_point(false, v, 0.1);
    CHECK(rho.entries.row(4).cwiseAbs().maxCoeff() < 1e-20);
    CHECK(rho.entries.col(4).cwiseAbs().maxCoeff() < 1e-20);
  }
}

TEST_CASE("off configuration matches the four-level subsystem") {
  for (double v : {-4.0, 0.0, 1.5}) {
    for (double d21 : {-0.3, 0.0, 0.05}) {
      auto dr = fig3_drives(false);
      dr.delta21 = d21;
      auto h = build_hamiltonian(fig3_scheme(), dr, v);
      auto full = steady_state(build_liouvillian(h, fig3_decay()));
      auto sub = steady_state(build_liouvillian(h.without_level(4), fig3_decay().without_level(4)));
      CHECK(max_abs_diff(full.entries.topLeftCorner(4, 4), sub.entries) < 1e-10);
    }
  }
}

TEST_CASE("steady state agrees with long-time propagation at a fig3 point") {
  for (bool on : {false, true}) {
    auto dr = fig3_drives(on);
    dr.delta21 = 0.15;
    auto L = build_liouvillian(build_hamiltonian(fig3_scheme(), dr, -1.0), fig3_decay());
    auto ss = steady_state(L);
    auto late = propagate(DensityMatrix::pure(5, 0), L, 1e4);
    CHECK(max_abs_diff(ss.entries, late.entries) < 1e-6);
  }
}

TEST_CASE("undriven five-level system relaxes into the ground manifold") {
  HamiltonianMatrix h;
  h.entries = Eigen::MatrixXd::Zero(5, 5);
  auto L = build_liouvillian(h, DecayModel::five_level());
  CHECK_THROWS_AS(steady_state(L), NullSpaceDegenerate);
  auto rho = propagate(DensityMatrix::pure(5, 4), L, 3000.0);
  CHECK(std::abs(rho.trace() - 1.0) < 1e-10);
  // Integrator budget is 1e-10 per unit time.
  CHECK(std::abs(rho.population(0) + rho.population(2) - 1.0) < 3000.0 * 1e-10);

  // A transit rate equalizes the ground levels and makes the state unique.
  auto unique = steady_state(build_liouvillian(h, DecayModel::five_level(1.0, 0.01, 0.01)));
  CHECK(unique.population(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(unique.population(2) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("liouvillian rejects mismatched or invalid decay") {
  auto h = build_hamiltonian(fig3_scheme(), fig3_drives(true), 0.0);
  CHECK_THROWS_AS(build_liouvillian(h, three_level_lambda()), InvalidArgument);
  auto d = fig3_decay();
  d.branching[1] = {0, 1.0, 0, 0, 0};
  CHECK_THROWS_AS(build_liouvillian(h, d), InvalidArgument);
}

TEST_CASE("lossy mode falls back to a normalized null vector") {
  auto decay = fig3_decay();
  decay.trace_preserving = false;
  auto L = build_liouvillian(build_hamiltonian(fig3_scheme(), fig3_drives(true), 0.0), decay);
  CHECK_FALSE(L.trace_preserving);
  auto rho = steady_state(L);
  CHECK(std::abs(rho.trace() - 1.0) < 1e-10);
}
