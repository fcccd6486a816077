#pragma once

#include <span>
#include <vector>

#include "bep/errors.hpp"
#include "bep/field.hpp"
#include "bep/grid.hpp"

namespace bep {

/// Normalized forward transform of real samples given in grid storage order.
/// The result is exactly Hermitian. Throws std::invalid_argument on a size mismatch.
SpectralField to_spectral(const GridPtr& grid, std::span<const double> samples);

/// Real physical samples of a field (the imaginary part of the inverse
/// transform is discarded; see imaginary_leakage).
RealBuffer to_physical(const SpectralField& u);

/// Physical samples of every component, two components per transform.
std::vector<RealBuffer> to_physical(const VectorField& v);

/// max |Im u(x)| / max |Re u(x)| of the full complex inverse transform.
/// Zero for exactly Hermitian coefficients.
double imaginary_leakage(const SpectralField& u);

/// Point value at x = 0 (sum of all coefficients, real part).
double value_at_origin(const SpectralField& u);

/// out(xi) = symbol(xi) * u(xi) at every lattice point. `symbol` is called
/// with the per-axis angular frequencies of the point.
template <class Symbol>
SpectralField apply_multiplier(const SpectralField& u, Symbol&& symbol) {
  SpectralField out(u.grid_ptr());
  auto src = u.coeffs();
  auto dst = out.coeffs();
  for_each_frequency(u.grid(), [&](std::size_t flat, std::span<const double> xi) {
    dst[flat] = symbol(xi) * src[flat];
  });
  return out;
}

/// Exact spectral derivative, multiplier i*xi_axis; the unpaired Nyquist
/// mode of the differentiated axis is set to zero so real fields stay real.
/// Throws std::out_of_range for an invalid axis.
SpectralField partial_derivative(const SpectralField& u, int axis);
VectorField gradient(const SpectralField& u);
SpectralField divergence(const VectorField& v);
/// Multiplier -|xi|^2.
SpectralField laplacian(const SpectralField& u);

/// (1 - Laplacian)^{-1}: multiplier 1 / (1 + |xi|^2).
SpectralField helmholtz_inverse(const SpectralField& u);
/// (1 - Laplacian): multiplier 1 + |xi|^2.
SpectralField helmholtz_forward(const SpectralField& u);
VectorField helmholtz_inverse(const VectorField& v);
VectorField helmholtz_forward(const VectorField& v);

/// 2/3 rule: zero every coefficient with |k_a| > N_a/3 on some axis.
SpectralField dealias(const SpectralField& u);
VectorField dealias(const VectorField& v);
/// True if no retained-band violation exceeds `tol` * max |c|.
bool is_dealiased(const SpectralField& u, double tol = 0.0);
/// Zeroes the truncated band in place.
void dealias_in_place(SpectralField& u);

/// Physical-space product of two real fields followed by dealias.
SpectralField pointwise_product(const SpectralField& u, const SpectralField& v);

/// Spectral interpolation onto a grid with the same lengths and at least as
/// many points per axis (zero padding; an unpaired Nyquist coefficient is
/// split evenly between +-N/2). Throws std::invalid_argument otherwise.
SpectralField resample(const SpectralField& u, const GridPtr& target);

/// Flat indices of all lattice points with |k_a| <= limit_a on every axis.
std::vector<std::size_t> band_indices(const Grid& grid, std::span<const std::int64_t> limit);

}  // namespace bep
