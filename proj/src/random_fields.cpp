#include "bep/random_fields.hpp"

#include <cmath>
#include <vector>

namespace bep {

SpectralField random_field(const GridPtr& grid, const ModeFilter& keep, std::mt19937_64& rng) {
  const Grid& g = *grid;
  const int d = g.dim();
  std::normal_distribution<double> normal(0.0, 1.0);
  SpectralField u(grid);
  std::vector<std::size_t> idx(d, 0);
  std::vector<std::int64_t> k(d);
  for (std::size_t flat = 0; flat < g.total(); ++flat) {
    bool nyquist = false;
    for (int a = 0; a < d; ++a) {
      k[a] = g.wavenumber(a, idx[a]);
      nyquist = nyquist || k[a] == -static_cast<std::int64_t>(g.size(a) / 2);
    }
    // Draw for every point so the stream does not depend on the filter.
    const double re = normal(rng);
    const double im = normal(rng);
    if (!nyquist && keep(k)) u[flat] = cplx(re, im);
    for (int a = d - 1; a >= 0; --a) {
      if (++idx[a] < g.size(a)) break;
      idx[a] = 0;
    }
  }
  SpectralField out(grid);
  for (std::size_t flat = 0; flat < g.total(); ++flat) {
    out[flat] = 0.5 * (u[flat] + std::conj(u[g.mirror_flat(flat)]));
  }
  return out;
}

SpectralField random_band_limited(const GridPtr& grid, double fraction, std::mt19937_64& rng) {
  std::vector<std::int64_t> limit(grid->dim());
  for (int a = 0; a < grid->dim(); ++a) {
    limit[a] = static_cast<std::int64_t>(
        std::floor(fraction * static_cast<double>(grid->dealias_cutoff(a))));
  }
  return random_field(
      grid,
      [limit](std::span<const std::int64_t> k) {
        for (std::size_t a = 0; a < k.size(); ++a) {
          if (std::llabs(k[a]) > limit[a]) return false;
        }
        return true;
      },
      rng);
}

VectorField random_band_limited_vector(const GridPtr& grid, double fraction, std::mt19937_64& rng) {
  std::vector<SpectralField> comps;
  for (int i = 0; i < grid->dim(); ++i) comps.push_back(random_band_limited(grid, fraction, rng));
  return VectorField(std::move(comps));
}

}  // namespace bep
