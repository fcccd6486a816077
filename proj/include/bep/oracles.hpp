#pragma once

// Reference implementations used by the test suites and `besov-ep selfcheck`.
// Everything here is deliberately naive and shares no code path with the
// production operators: no FFTs, explicit index loops, its own symbol and
// smooth-step code, and adaptive quadrature for the bump profile.

#include "bep/field.hpp"

namespace bep::oracle {

/// exp(-1/t)-based smooth step, 1 for t <= a and 0 for t >= b.
double smooth_step(double t, double a, double b);

/// Dyadic symbol of block j at radius r (j = -1 is the low-pass symbol).
double block_symbol(int j, double r);

/// Fourier transform of the bump: 1 on |xi| <= 1/4, 0 on |xi| >= 1/2.
double bump_hat(double xi);
/// (1/2pi) * integral of bump_hat(xi) exp(i x xi) over the real line, by
/// adaptive Gauss-Kronrod quadrature.
double bump_value(double x);
/// L2 norm of the bump over the real line, via Plancherel.
double bump_l2_norm();

/// i * xi_axis * u, Nyquist mode of that axis zeroed.
SpectralField derivative(const SpectralField& u, int axis);
/// Multiplier 1 / (1 + |xi|^2).
SpectralField helmholtz_inverse(const SpectralField& u);
/// Exact convolution of the coefficient arrays, truncated to |k_a| <= N_a/3.
SpectralField convolve(const SpectralField& u, const SpectralField& v);
/// Block j applied with block_symbol.
SpectralField dyadic_block(const SpectralField& u, int j);

/// (u . grad) v, component i = sum_k u_k d_k v_i.
VectorField convective(const VectorField& u, const VectorField& v);
/// Nonlocal bilinear terms with (grad u)_{ij} = d_j u_i and row divergence.
VectorField q_bilinear(const VectorField& u, const VectorField& v);
VectorField r_bilinear(const VectorField& u, const VectorField& v);
/// Delta_j(v . grad f) - v . grad(Delta_j f).
SpectralField commutator(const VectorField& v, const SpectralField& f, int j);

}  // namespace bep::oracle
