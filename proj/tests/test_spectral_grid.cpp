#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include "bep/field_io.hpp"
#include "bep/oracles.hpp"
#include "bep/random_fields.hpp"
#include "bep/spectral_ops.hpp"
#include "support.hpp"

using namespace bep;
using bep::test::kPi;
using bep::test::rel_diff;

namespace {

GridPtr grid_1d(std::size_t n = 8) { return make_grid(1, {2 * kPi}, {n}); }

SpectralField from_function(const GridPtr& g, auto&& fn) {
  RealBuffer x(g->total());
  for_each_point(*g, [&](std::size_t flat, std::span<const double> p) { x[flat] = fn(p); });
  return to_spectral(g, x);
}

}  // namespace

TEST_CASE("make_grid builds the frequency lattice") {
  auto g = grid_1d();
  std::vector<std::int64_t> ks;
  for (std::size_t i = 0; i < 8; ++i) ks.push_back(g->wavenumber(0, i));
  std::sort(ks.begin(), ks.end());
  CHECK(ks == std::vector<std::int64_t>{-4, -3, -2, -1, 0, 1, 2, 3});
  CHECK(g->frequency(0, 3) == doctest::Approx(3.0));

  auto g2 = make_grid(2, {4 * kPi, 2 * kPi}, {8, 8});
  CHECK(g2->frequency_step(0) == doctest::Approx(0.5));
  CHECK(g2->frequency_step(1) == doctest::Approx(1.0));
  CHECK(g2->cell_volume() > 0.0);

  CHECK_THROWS_AS(make_grid(2, {2 * kPi, 2 * kPi}, {6, 8}), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1, {0.0}, {8}), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1, {1.0}, {2}), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(0, {}, {}), std::invalid_argument);
  CHECK(*make_grid(2, {1.0, 2.0}, {8, 16}) == *make_grid(2, {1.0, 2.0}, {8, 16}));
}

TEST_CASE("to_spectral and to_physical") {
  auto g = grid_1d();
  SUBCASE("cosine has coefficients 1/2 at +-1") {
    auto u = from_function(g, [](auto x) { return std::cos(x[0]); });
    for (std::size_t i = 0; i < 8; ++i) {
      const double expect = std::llabs(g->wavenumber(0, i)) == 1 ? 0.5 : 0.0;
      CHECK(std::abs(u[i] - cplx(expect)) < 1e-15);
    }
  }
  SUBCASE("zero samples") {
    RealBuffer z(8, 0.0);
    CHECK(to_spectral(g, z).max_abs() == 0.0);
  }
  SUBCASE("random round trip") {
    auto g2 = make_grid(2, {3.0, 5.0}, {64, 32});
    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd;
    RealBuffer x(g2->total());
    for (auto& v : x) v = nd(rng);
    auto y = to_physical(to_spectral(g2, x));
    double err = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      err += (x[i] - y[i]) * (x[i] - y[i]);
      norm += x[i] * x[i];
    }
    CHECK(std::sqrt(err / norm) < 1e-13);
    auto u = to_spectral(g2, x);
    double herm = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) herm = std::max(herm, std::abs(u[i] - std::conj(u[g2->mirror_flat(i)])));
    CHECK(herm == 0.0);
    CHECK(imaginary_leakage(u) == 0.0);
  }
  SUBCASE("shape mismatch") {
    RealBuffer x(7, 0.0);
    CHECK_THROWS_AS(to_spectral(g, x), std::invalid_argument);
  }
}

TEST_CASE("apply_multiplier") {
  auto g = make_grid(2, {2 * kPi, 2 * kPi}, {16, 8});
  std::mt19937_64 rng(1);
  auto u = random_band_limited(g, 1.0, rng);
  CHECK(rel_diff(apply_multiplier(u, [](auto) { return 1.0; }), u) == 0.0);
  CHECK(apply_multiplier(u, [](auto) { return 0.0; }).max_abs() == 0.0);

  auto wave = from_function(g, [](auto x) { return std::cos(3 * x[0]); });
  auto scaled = apply_multiplier(wave, [](auto xi) { return 1.0 / (1.0 + xi[0] * xi[0] + xi[1] * xi[1]); });
  CHECK(rel_diff(scaled, 0.1 * wave) < 1e-15);

  auto a = [](std::span<const double> xi) { return std::exp(-xi[0] * xi[0]); };
  auto b = [](std::span<const double> xi) { return 1.0 + xi[1]; };
  auto ab = [&](std::span<const double> xi) { return a(xi) * b(xi); };
  CHECK(rel_diff(apply_multiplier(apply_multiplier(u, a), b), apply_multiplier(u, ab)) < 1e-16);
}

TEST_CASE("derivatives") {
  auto g = make_grid(2, {2 * kPi, 4 * kPi}, {16, 16});
  auto s = from_function(g, [](auto x) { return std::sin(x[0]); });
  auto c = from_function(g, [](auto x) { return std::cos(x[0]); });
  CHECK(rel_diff(partial_derivative(s, 0), c) < 1e-15);
  CHECK_THROWS_AS(partial_derivative(s, 2), std::out_of_range);

  std::mt19937_64 rng(3);
  auto u = random_band_limited(g, 1.0, rng);
  CHECK(rel_diff(divergence(gradient(u)), laplacian(u)) < 1e-15);

  auto k = from_function(g, [](auto) { return 2.5; });
  auto grad = gradient(k);
  CHECK(grad.max_abs() == 0.0);

  // Diagonal operators commute.
  CHECK(rel_diff(partial_derivative(helmholtz_inverse(u), 1), helmholtz_inverse(partial_derivative(u, 1))) < 1e-15);
  CHECK(rel_diff(partial_derivative(u, 0), oracle::derivative(u, 0)) < 1e-15);
}

TEST_CASE("helmholtz_inverse") {
  auto g = make_grid(2, {2 * kPi, 2 * kPi}, {16, 16});
  auto wave = from_function(g, [](auto x) { return std::cos(2 * x[0] + x[1]); });
  CHECK(rel_diff(helmholtz_inverse(wave), (1.0 / 6.0) * wave) < 1e-15);
  auto k = from_function(g, [](auto) { return -1.5; });
  CHECK(rel_diff(helmholtz_inverse(k), k) == 0.0);
  std::mt19937_64 rng(11);
  auto u = random_band_limited(g, 1.0, rng);
  auto back = helmholtz_forward(helmholtz_inverse(u));
  CHECK((back - u).coefficient_norm() / u.coefficient_norm() < 1e-14);
}

TEST_CASE("dealias") {
  auto g = make_grid(2, {2 * kPi, 2 * kPi}, {32, 16});
  std::mt19937_64 rng(5);
  auto inside = random_band_limited(g, 1.0, rng);
  CHECK(rel_diff(dealias(inside), inside) == 0.0);
  CHECK(is_dealiased(inside));

  auto full = random_band_limited(g, 3.0, rng);
  CHECK_FALSE(is_dealiased(full));
  auto once = dealias(full);
  CHECK(rel_diff(dealias(once), once) == 0.0);

  auto nyq = from_function(g, [](auto x) { return std::cos(16 * x[0]); });
  CHECK(nyq.max_abs() > 0.9);
  CHECK(dealias(nyq).max_abs() == 0.0);
}

TEST_CASE("pointwise_product") {
  auto g = make_grid(2, {2 * kPi, 2 * kPi}, {16, 8});
  auto c = from_function(g, [](auto x) { return std::cos(x[0]); });
  auto one = from_function(g, [](auto) { return 1.0; });
  std::mt19937_64 rng(9);
  auto u = random_band_limited(g, 3.0, rng);
  CHECK(rel_diff(pointwise_product(u, one), dealias(u)) < 1e-15);
  auto expect = from_function(g, [](auto x) { return 0.5 + 0.5 * std::cos(2 * x[0]); });
  CHECK(rel_diff(pointwise_product(c, c), expect) < 1e-15);

  auto g8 = make_grid(2, {2 * kPi, 3.0}, {8, 8});
  auto a = random_band_limited(g8, 1.0, rng);
  auto b = random_band_limited(g8, 1.0, rng);
  CHECK(rel_diff(pointwise_product(a, b), oracle::convolve(a, b)) < 1e-12);
  CHECK(rel_diff(pointwise_product(a, b), pointwise_product(b, a)) < 1e-15);
  CHECK_THROWS_AS(pointwise_product(a, c), GridMismatch);
}

TEST_CASE("Parseval") {
  auto g = make_grid(2, {3.0, 7.0}, {32, 16});
  std::mt19937_64 rng(2);
  auto u = random_band_limited(g, 1.5, rng);
  auto x = to_physical(u);
  double quad = 0.0;
  for (double v : x) quad += v * v;
  quad *= g->cell_volume();
  const double coef = u.coefficient_norm() * u.coefficient_norm() * g->volume();
  CHECK(std::abs(quad - coef) / coef < 1e-12);
}

TEST_CASE("operations leave inputs untouched") {
  auto g = make_grid(2, {2 * kPi, 2 * kPi}, {16, 16});
  std::mt19937_64 rng(4);
  auto u = random_band_limited(g, 3.0, rng);
  const auto copy = u;
  (void)dealias(u);
  (void)helmholtz_inverse(u);
  (void)partial_derivative(u, 1);
  (void)pointwise_product(u, u);
  (void)to_physical(u);
  CHECK(rel_diff(u, copy) == 0.0);
}

TEST_CASE("binary field dump round trip") {
  auto g = make_grid(2, {2.5, 7.0}, {16, 8});
  std::mt19937_64 rng(8);
  auto u = random_band_limited(g, 1.0, rng);
  auto path = std::filesystem::temp_directory_path() / "bep_dump_test.bepf";
  write_field(path, u);
  auto v = read_field(path);
  CHECK(v.grid() == u.grid());
  CHECK(rel_diff(u, v) == 0.0);
  std::ifstream is(path, std::ios::binary);
  char magic[4];
  is.read(magic, 4);
  CHECK(std::string(magic, 4) == "BEPF");
  std::filesystem::remove(path);
}
