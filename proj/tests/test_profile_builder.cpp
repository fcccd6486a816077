#include <doctest.h>

#include <cmath>
#include <limits>

#include "bep/errors.hpp"
#include "bep/oracles.hpp"
#include "bep/profile_builder.hpp"
#include "bep/spectral_ops.hpp"
#include "support.hpp"

using namespace bep;
using bep::test::rel_diff;

namespace {

struct Setup {
  GridPtr grid;
  LPSymbols sym;
  BumpProfile bump;
};

/// Aligned 2-D box with q = 8 periods; axis 0 resolves the band of n_top.
Setup aligned_setup(int n_top, std::size_t n1 = 16) {
  const double L = aligned_box_length(8);
  std::size_t n0 = 64;
  while (static_cast<double>(n0 / 3) < 8.0 * (std::ldexp(1.0, n_top) + 0.36)) n0 *= 2;
  auto grid = make_grid(2, {L, L}, {n0, n1});
  auto axis = make_grid(1, {L}, {n1});
  return {grid, build_lp_symbols(grid), build_bump(axis, 0.05)};
}

const Setup& shared_setup() {
  static const Setup s = aligned_setup(10);
  return s;
}

}  // namespace

TEST_CASE("build_bump") {
  CHECK(bump_hat(0.0) == 1.0);
  CHECK(bump_hat(0.25) == 1.0);
  CHECK(bump_hat(-0.2) == 1.0);
  CHECK(bump_hat(0.6) == 0.0);
  CHECK(bump_hat(0.5) == 0.0);
  CHECK(bump_hat(0.37) == bump_hat(-0.37));
  CHECK(bump_hat(0.37) > 0.0);

  const double L = 2400.0;
  auto axis = make_grid(1, {L}, {1024});
  auto b = build_bump(axis);
  CHECK(b.boundary_decay < 1e-12);
  CHECK(b.phi0 > 0.0);
  CHECK(b.phi0 == doctest::Approx(oracle::bump_value(0.0)).epsilon(1e-12));
  for (std::size_t i = 0; i < axis->size(0); ++i) {
    CHECK(b.hat_samples[i] == b.hat_samples[axis->axis_mirror(0)[i]]);
    CHECK(b.hat_samples[i] >= 0.0);
  }
  // Every third grid point from the origin, against direct quadrature.
  double worst = 0.0;
  for (std::size_t i = 0; i < 20; ++i) {
    const std::size_t k = 3 * i;
    const double x = axis->coordinate(0, k);
    worst = std::max(worst, std::abs(b.phys_samples[k] - oracle::bump_value(x)));
    CHECK(b.phys_samples[k] == doctest::Approx(b.phys_samples[axis->axis_mirror(0)[k]]).epsilon(1e-12));
  }
  CHECK(worst < 1e-10);

  CHECK_THROWS_AS(build_bump(make_grid(1, {100.0}, {64})), InfeasibleError);
  CHECK_THROWS_AS(build_bump(make_grid(1, {2400.0}, {256})), std::invalid_argument);
}

TEST_CASE("make_fn") {
  const auto& s = shared_setup();
  const Grid& g = *s.grid;
  for (int n = 4; n <= 10; ++n) {
    auto f = make_fn(s.grid, n, s.bump);
    const double a = carrier_frequency(n);
    double outside = 0.0, total = 0.0;
    for_each_frequency(g, [&](std::size_t flat, std::span<const double> xi) {
      const double e = std::norm(f[flat]);
      total += e;
      const double r = std::hypot(xi[0], xi[1]);
      const bool in_ring = r >= a - 0.5 && r <= a + 0.5 && std::abs(std::abs(xi[0]) - a) <= 0.5;
      if (!in_ring) outside += e;
      CHECK_FALSE((e != 0.0 && (r < 4.0 / 3.0 * std::ldexp(1.0, n) || r > 1.5 * std::ldexp(1.0, n))));
    });
    CHECK(outside / total < 1e-12);
    CHECK(rel_diff(dyadic_block(f, n, s.sym), f) == 0.0);
    for (int j = -1; j <= s.sym.j_max(); ++j) {
      if (j == n) continue;
      CHECK(lp_norm(dyadic_block(f, j, s.sym), 2.0) / lp_norm(f, 2.0) < 1e-12);
    }
    CHECK(value_at_origin(f) == doctest::Approx(s.bump.phi0 * s.bump.phi0).epsilon(1e-12));
    CHECK(imaginary_leakage(f) < 1e-12);
    // Even in x_1: coefficients at (-k1, k2) and (k1, k2) agree.
    double odd = 0.0;
    for (std::size_t flat = 0; flat < g.total(); ++flat) {
      const std::size_t i0 = flat / g.stride(0), i1 = flat % g.stride(0);
      odd = std::max(odd, std::abs(f[flat] - f[g.axis_mirror(0)[i0] * g.stride(0) + i1]));
    }
    CHECK(odd == 0.0);
    // Derivative splits into the two lemma parts.
    auto split = fn_cos_part(s.grid, n, s.bump) - a * fn_sin_part(s.grid, n, s.bump);
    CHECK(rel_diff(partial_derivative(f, 0), split) < 1e-13);
  }
  CHECK_THROWS_AS(make_fn(s.grid, 12, s.bump), std::invalid_argument);
}

TEST_CASE("low_freq_cutoff localizes f_n") {
  const auto& s = shared_setup();
  for (int n = 4; n <= 9; ++n) {
    auto f = make_fn(s.grid, n, s.bump);
    for (int j = 0; j <= n; ++j) CHECK(low_freq_cutoff(f, j, s.sym).max_abs() == 0.0);
    for (int j = n + 2; j <= s.sym.j_max() + 1; ++j) CHECK(rel_diff(low_freq_cutoff(f, j, s.sym), f) == 0.0);
  }
}

TEST_CASE("make_u0") {
  const auto& s = shared_setup();
  DatumSpec spec;
  spec.idx = {2.5, 2.0, 2.0};
  spec.n_min = 3;
  spec.n_max = 10;
  spec.validate(*s.grid, s.sym);
  auto u0 = make_u0(s.grid, spec, s.bump);
  CHECK(u0.components() == 2);
  CHECK(u0[1].max_abs() == 0.0);
  CHECK(imaginary_leakage(u0[0]) < 1e-12);

  std::vector<double> fn_norms;
  for (int n = 3; n <= 10; ++n) {
    auto f = make_fn(s.grid, n, s.bump);
    auto expect = datum_weight(n, spec.idx.s) * f;
    CHECK(rel_diff(dyadic_block(u0[0], n, s.sym), expect) < 1e-13);
    fn_norms.push_back(lp_norm(f, 2.0));
  }
  double oracle_sum = 0.0;
  for (int n = 3; n <= 10; ++n) {
    const double term = std::exp2(n * spec.idx.s) * datum_weight(n, spec.idx.s) * fn_norms[n - 3];
    oracle_sum += term * term;
  }
  CHECK(besov_norm(u0, spec.idx, s.sym) == doctest::Approx(std::sqrt(oracle_sum)).epsilon(1e-12));

  SUBCASE("single block cancellation") {
    DatumSpec one = spec;
    one.n_max = 3;
    auto v = make_u0(s.grid, one, s.bump);
    const double inf = std::numeric_limits<double>::infinity();
    for (double sv : {1.0, 2.5, 4.0}) {
      one.idx.s = sv;
      auto w = make_u0(s.grid, one, s.bump);
      CHECK(besov_norm(w, one.idx.with_r(inf), s.sym) == doctest::Approx(fn_norms[0] / 9.0).epsilon(1e-12));
    }
    (void)v;
  }
  SUBCASE("single_n selects one term") {
    DatumSpec one = spec;
    one.single_n = 6;
    auto v = make_u0(s.grid, one, s.bump);
    CHECK(rel_diff(v[0], datum_weight(6, 2.5) * make_fn(s.grid, 6, s.bump)) < 1e-15);
  }
  SUBCASE("validation") {
    DatumSpec bad = spec;
    bad.n_max = 12;
    CHECK_THROWS_AS(bad.validate(*s.grid, s.sym), std::invalid_argument);
    bad = spec;
    bad.n_min = 8;
    bad.n_max = 5;
    CHECK_THROWS_AS(bad.validate(*s.grid, s.sym), std::invalid_argument);
  }
}

TEST_CASE("spectral disjointness of the terms") {
  const auto& s = shared_setup();
  for (int n = 3; n < 10; ++n) {
    auto a = make_fn(s.grid, n, s.bump);
    auto b = make_fn(s.grid, n + 1, s.bump);
    bool overlap = false;
    for (std::size_t i = 0; i < a.size(); ++i) overlap = overlap || (a[i] != cplx(0.0) && b[i] != cplx(0.0));
    CHECK_FALSE(overlap);
  }
}

TEST_CASE("Besov norm of the datum is uniform in the truncation") {
  auto s = aligned_setup(12);
  const BesovIndex idx{2.5, 2.0, 2.0};
  std::vector<double> norms;
  for (int nmax = 6; nmax <= 12; ++nmax) {
    DatumSpec spec{idx, 3, nmax, std::nullopt};
    norms.push_back(besov_norm(make_u0(s.grid, spec, s.bump), idx, s.sym));
  }
  for (std::size_t i = 1; i < norms.size(); ++i) CHECK(norms[i] > norms[i - 1]);
  // With r = 2 the tail after n_max is sum_{n > n_max} n^{-4}; from n_max = 9 on
  // it moves the norm by less than 1%.
  CHECK((norms.back() - norms[3]) / norms.back() < 0.01);
  const double f_norm = lp_norm(make_fn(s.grid, 6, s.bump), 2.0);
  double zeta_tail = 0.0;
  for (int n = 3; n < 100000; ++n) zeta_tail += std::pow(n, -4.0);
  CHECK(norms.back() <= 1.001 * f_norm * std::sqrt(zeta_tail));
  const double inf = std::numeric_limits<double>::infinity();
  DatumSpec a{idx, 3, 6, std::nullopt}, b{idx, 3, 12, std::nullopt};
  CHECK(besov_norm(make_u0(s.grid, a, s.bump), idx.with_r(inf), s.sym) ==
        doctest::Approx(besov_norm(make_u0(s.grid, b, s.bump), idx.with_r(inf), s.sym)).epsilon(1e-14));
}

TEST_CASE("center_value_bound") {
  const auto& s = shared_setup();
  const BesovIndex idx{2.5, 2.0, 2.0};
  DatumSpec spec{idx, 3, 10, std::nullopt};
  auto u0 = make_u0(s.grid, spec, s.bump);
  auto cb = center_value_bound(u0[0], s.bump, spec);
  double weights = 0.0;
  for (int n = 3; n <= 10; ++n) weights += datum_weight(n, 2.5);
  CHECK(cb.f0 == doctest::Approx(s.bump.phi0 * s.bump.phi0 * weights).epsilon(1e-12));
  CHECK(cb.f0_formula == doctest::Approx(cb.f0).epsilon(1e-12));
  CHECK(cb.delta > 0.0);
  CHECK(verify_center_bound(u0[0], cb, 2));
  MESSAGE("delta = " << cb.delta << ", c0 = " << cb.c0);

  DatumSpec one{idx, 3, 3, std::nullopt};
  auto v = make_u0(s.grid, one, s.bump);
  auto cb1 = center_value_bound(v[0], s.bump, one);
  CHECK(cb1.c0 == doctest::Approx(0.5 * s.bump.phi0 * s.bump.phi0 / 9.0 * std::exp2(-7.5)).epsilon(1e-12));
}

TEST_CASE("provenance record") {
  const auto& s = shared_setup();
  DatumSpec spec{{2.5, 2.0, 2.0}, 3, 9, std::nullopt};
  auto j = datum_provenance(*s.grid, spec, s.bump);
  CHECK(j["d"] == 2);
  CHECK(j["n_max"] == 9);
  CHECK(j["boundary_decay"].get<double>() == s.bump.boundary_decay);
  CHECK(j["grid"]["sizes"][0].get<std::size_t>() == s.grid->size(0));
}
