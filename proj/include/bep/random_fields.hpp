#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>

#include "bep/field.hpp"

namespace bep {

/// Predicate on the signed wavenumber vector of a lattice point.
using ModeFilter = std::function<bool(std::span<const std::int64_t>)>;

/// Real random field: standard-normal coefficients on the modes accepted by
/// `keep`, symmetrized to exact Hermitian form, Nyquist modes zeroed.
SpectralField random_field(const GridPtr& grid, const ModeFilter& keep, std::mt19937_64& rng);

/// Random field supported on |k_a| <= fraction * (N_a / 3) on every axis.
SpectralField random_band_limited(const GridPtr& grid, double fraction, std::mt19937_64& rng);

/// d-component version of random_band_limited.
VectorField random_band_limited_vector(const GridPtr& grid, double fraction, std::mt19937_64& rng);

}  // namespace bep
