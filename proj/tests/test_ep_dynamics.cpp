#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "bep/ep_dynamics.hpp"
#include "bep/errors.hpp"
#include "bep/oracles.hpp"
#include "bep/random_fields.hpp"
#include "bep/spectral_ops.hpp"
#include "support.hpp"

using namespace bep;
using bep::test::kPi;
using bep::test::rel_diff;

namespace {

GridPtr square(int d, std::size_t n) {
  return make_grid(d, std::vector<double>(d, 2.0 * kPi), std::vector<std::size_t>(d, n));
}

VectorField random_velocity(const GridPtr& g, double amplitude, std::uint64_t seed, double fraction = 1.0) {
  std::mt19937_64 rng(seed);
  VectorField u = random_band_limited_vector(g, fraction, rng);
  u *= amplitude / u.max_abs();
  return u;
}

double max_hermitian_defect(const VectorField& u) {
  double m = 0.0;
  for (const auto& c : u) {
    for (std::size_t i = 0; i < c.size(); ++i) m = std::max(m, std::abs(c[i] - std::conj(c[u.grid().mirror_flat(i)])));
  }
  return m;
}

}  // namespace

TEST_CASE("nonlinear terms match the index-expanded oracles") {
  for (int d : {2, 3}) {
    CAPTURE(d);
    const auto g = square(d, 8);
    const VectorField u = random_velocity(g, 1.0, 11 + d);
    const VectorField v = random_velocity(g, 1.0, 29 + d);
    CHECK(rel_diff(convective(u, v), oracle::convective(u, v)) < 1e-12);
    CHECK(rel_diff(q_bilinear(u, v), oracle::q_bilinear(u, v)) < 1e-12);
    CHECK(rel_diff(r_bilinear(u, v), oracle::r_bilinear(u, v)) < 1e-12);
    const VectorField expect = oracle::q_bilinear(u, u) + oracle::r_bilinear(u, u) - oracle::convective(u, u);
    CHECK(rel_diff(rhs(u), expect) < 1e-12);
    CHECK(rel_diff(nonlocal_p(u), oracle::q_bilinear(u, u) + oracle::r_bilinear(u, u)) < 1e-12);
  }
}

TEST_CASE("momentum form residual") {
  SUBCASE("d = 2") {
    const VectorField u = random_velocity(square(2, 32), 1.0, 5);
    CHECK(momentum_residual(u) < 1e-10);
  }
  SUBCASE("d = 3") {
    const VectorField u = random_velocity(square(3, 16), 1.0, 6);
    CHECK(momentum_residual(u) < 1e-10);
  }
}

TEST_CASE("bilinear form properties") {
  const auto g = square(2, 16);
  const VectorField u = random_velocity(g, 1.0, 1);
  const VectorField v = random_velocity(g, 1.0, 2);
  const VectorField w = random_velocity(g, 1.0, 3);
  CHECK(rel_diff(bilinear(2.5 * u + v, w), 2.5 * bilinear(u, w) + bilinear(v, w)) < 1e-13);
  CHECK(rel_diff(bilinear(w, 2.5 * u + v), 2.5 * bilinear(w, u) + bilinear(w, v)) < 1e-13);
  CHECK(rel_diff(bilinear(u, u), rhs(u)) < 1e-14);

  const VectorField r = rhs(u);
  CHECK(max_hermitian_defect(r) < 1e-14 * r.max_abs());
  for (const auto& c : r) {
    CHECK(imaginary_leakage(c) < 1e-12);
    CHECK(is_dealiased(c));
  }
  CHECK(rhs(VectorField(g, 2)).max_abs() == 0.0);
}

TEST_CASE("physical state") {
  const auto g = square(2, 16);
  const VectorField u = random_velocity(g, 1.0, 4);
  const PhysicalState s = physical_state(u);
  const auto values = to_physical(u);
  for (int i = 0; i < 2; ++i) {
    for (std::size_t p = 0; p < g->total(); ++p) CHECK(s.value[i][p] == doctest::Approx(values[i][p]).epsilon(1e-14));
    for (int j = 0; j < 2; ++j) {
      const RealBuffer dij = to_physical(partial_derivative(u[i], j));
      double err = 0.0;
      for (std::size_t p = 0; p < g->total(); ++p) err = std::max(err, std::abs(s.jacobian[i * 2 + j][p] - dij[p]));
      CHECK(err < 1e-12);
    }
  }
  double speed = 0.0;
  for (std::size_t p = 0; p < g->total(); ++p) speed = std::max(speed, std::hypot(values[0][p], values[1][p]));
  CHECK(s.max_speed() == doctest::Approx(speed).epsilon(1e-14));
  CHECK_THROWS_AS(physical_state(VectorField(g, 3)), std::invalid_argument);
}

TEST_CASE("RK4 convergence order") {
  const auto g = square(2, 16);
  const VectorField u0 = random_velocity(g, 0.5, 9, 0.6);
  const double T = 0.2;
  auto integrate = [&](int steps) {
    VectorField u = u0;
    for (int k = 0; k < steps; ++k) u = step_rk4(u, T / steps);
    return u;
  };
  const VectorField a = integrate(4), b = integrate(8), c = integrate(16);
  const double ratio = (a - b).coefficient_norm() / (b - c).coefficient_norm();
  MESSAGE("Richardson ratio = " << ratio);
  CHECK(ratio > 13.0);
  CHECK(ratio < 19.0);

  // One-step error against a fine reference.
  auto fine = [&](double h) {
    VectorField u = u0;
    for (int k = 0; k < 32; ++k) u = step_rk4(u, h / 32);
    return u;
  };
  const double h = 0.04;
  const double e_big = (step_rk4(u0, h) - fine(h)).coefficient_norm();
  const double e_half = (step_rk4(u0, h / 2) - fine(h / 2)).coefficient_norm();
  const double local = e_big / e_half;
  MESSAGE("local error ratio = " << local);
  CHECK(local > 24.0);
  CHECK(local < 40.0);
}

TEST_CASE("step_rk4 errors") {
  const auto g = square(2, 16);
  const VectorField u = random_velocity(g, 1.0, 10);
  CHECK_THROWS_AS(step_rk4(u, 0.0), std::invalid_argument);
  try {
    step_rk4(u, 10.0);
    FAIL("expected a CFL violation");
  } catch (const SolverError& e) {
    CHECK(e.kind() == SolverError::Kind::cfl_violation);
  }
}

TEST_CASE("time step policy") {
  const auto g = square(2, 16);
  const VectorField u = random_velocity(g, 3.0, 12);
  const double speed = physical_state(u).max_speed();
  TimeStepPolicy pol;
  CHECK(choose_time_step(u, pol, 100.0) == doctest::Approx(0.25 * g->min_spacing() / std::max(1.0, speed)));
  pol.dt_max = 1e-3;
  CHECK(choose_time_step(u, pol, 100.0) == 1e-3);
  pol.min_steps = 10;
  CHECK(choose_time_step(u, pol, 1e-3) == doctest::Approx(1e-4));
  pol.cfl = 1.5;
  CHECK_THROWS_AS(choose_time_step(u, pol, 1.0), std::invalid_argument);
}

TEST_CASE("solve") {
  const auto g = square(2, 16);
  const LPSymbols sym = build_lp_symbols(g);
  const BesovIndex idx{2.5, 2.0, 2.0};
  const VectorField u0 = random_velocity(g, 0.5, 13, 0.6);

  SUBCASE("zero horizon keeps only the datum") {
    const SolveTrace tr = solve(u0, 0.0, 0.01, {}, idx, sym);
    REQUIRE(tr.times.size() == 1);
    CHECK(tr.times[0] == 0.0);
    CHECK(rel_diff(tr.snapshots[0], u0) == 0.0);
    CHECK(tr.norm_log[0].besov_s_diff == 0.0);
    CHECK(tr.steps == 0);
  }

  SUBCASE("perturbation form reproduces plain RK4 iterates") {
    const double dt = 0.01;
    const SolveTrace tr = solve(u0, 0.1, dt, {0.03, 0.1}, idx, sym);
    REQUIRE(tr.times.size() == 3);
    CHECK(tr.times[1] == 0.03);
    CHECK(tr.times[2] == 0.1);
    VectorField u = u0;
    for (int k = 0; k < 3; ++k) u = step_rk4(u, dt);
    CHECK(rel_diff(tr.snapshots[1], u) < 1e-12);
    for (int k = 0; k < 7; ++k) u = step_rk4(u, dt);
    CHECK(rel_diff(tr.snapshots[2], u) < 1e-12);
    for (const auto& r : tr.norm_log) CHECK(r.hermitian_defect < 1e-13);
    CHECK(tr.status == SolveTrace::Status::completed);
    CHECK(tr.cfl_log.size() == tr.steps);
  }

  SUBCASE("sample landing with uneven spacing") {
    const SolveTrace tr = solve(u0, 0.05, 0.02, {0.005, 0.031}, idx, sym);
    REQUIRE(tr.times.size() == 4);
    CHECK(tr.times[1] == 0.005);
    CHECK(tr.times[2] == 0.031);
    CHECK(tr.times[3] == 0.05);
  }

  SUBCASE("second-order remainder") {
    std::vector<double> w;
    const SolveTrace tr = solve(u0, 0.02, 0.001, {0.005, 0.01, 0.02}, idx, sym,
                                SolveOptions{.store_snapshots = false,
                                             .observer = [&](const SampleView& s) {
                                               if (s.t > 0) w.push_back(s.w.coefficient_norm());
                                             }});
    REQUIRE(w.size() == 3);
    CHECK(w[1] / w[0] == doctest::Approx(4.0).epsilon(0.05));
    CHECK(w[2] / w[1] == doctest::Approx(4.0).epsilon(0.05));
    CHECK(tr.snapshots.empty());
    CHECK(tr.norm_log[3].besov_sm2_w_inf <= tr.norm_log[3].besov_sm2_w);
  }

  SUBCASE("terminal diagnostics") {
    SolveOptions opt;
    opt.growth_guard = 0.5;
    CHECK_THROWS_AS(solve(u0, 0.1, 0.01, {}, idx, sym, opt), SolverError);
    opt.throw_on_abort = false;
    const SolveTrace tr = solve(u0, 0.1, 0.01, {}, idx, sym, opt);
    CHECK(tr.status == SolveTrace::Status::growth_guard);
    CHECK(!tr.diagnostic.empty());
    const SolveTrace cfl = solve(u0, 10.0, 5.0, {}, idx, sym, SolveOptions{.throw_on_abort = false});
    CHECK(cfl.status == SolveTrace::Status::cfl_violation);
  }

  SUBCASE("argument errors") {
    CHECK_THROWS_AS(solve(u0, 0.1, 0.0, {}, idx, sym), std::invalid_argument);
    CHECK_THROWS_AS(solve(u0, 0.1, 0.01, {0.2}, idx, sym), std::invalid_argument);
    CHECK_THROWS_AS(solve(u0, -1.0, 0.01, {}, idx, sym), std::invalid_argument);
  }

  SUBCASE("trace csv") {
    const SolveTrace tr = solve(u0, 0.02, 0.01, {}, idx, sym);
    std::ostringstream os;
    write_trace_csv(os, tr);
    const std::string text = os.str();
    CHECK(text.rfind("t,besov_s,besov_sm1_diff,besov_sm2_w,cfl\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 3);
  }
}
