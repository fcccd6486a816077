#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "bep/field.hpp"
#include "bep/littlewood_paley.hpp"

namespace bep {

inline constexpr Transition kBumpTransition{0.25, 0.5};

/// Fourier transform of the bump: smooth, even, 1 on |xi| <= 1/4, 0 on |xi| >= 1/2.
inline double bump_hat(double xi) { return smooth_step(xi < 0 ? -xi : xi, kBumpTransition); }

/// (17/12) 2^n.
double carrier_frequency(int n);

/// 24 pi q / 17: every carrier (17/12) 2^n is then the lattice frequency 2^n q.
double aligned_box_length(int q);

/// n^{-2} 2^{-ns}.
double datum_weight(int n, double s);

/// One-dimensional bump on a periodic axis.
struct BumpProfile {
  GridPtr axis_grid;
  std::vector<double> hat_samples;   // bump_hat at the axis frequencies, storage order
  std::vector<double> phys_samples;  // periodized bump at the axis points
  double boundary_decay = 0.0;       // max |phi| on the outer 5% of the box at each end
  double phi0 = 0.0;                 // phi(0)

  double hat(double xi) const { return bump_hat(xi); }
};

/// Throws std::invalid_argument if the axis does not resolve |xi| = 1/2 and
/// InfeasibleError if boundary_decay >= decay_tol.
BumpProfile build_bump(const GridPtr& axis_grid, double decay_tol = 1e-12);

/// phi(x_1) cos(a_n x_1) phi(x_2)...phi(x_d), built from its exact spectrum.
/// Throws std::invalid_argument if a_n + 1/2 exceeds the dealiased lattice.
SpectralField make_fn(const GridPtr& grid, int n, const BumpProfile& bump);

/// phi'(x_1) cos(a_n x_1) phi(x_2)..., and phi(x_1) sin(a_n x_1) phi(x_2)...;
/// d/dx_1 f_n = cos_part - a_n * sin_part.
SpectralField fn_cos_part(const GridPtr& grid, int n, const BumpProfile& bump);
SpectralField fn_sin_part(const GridPtr& grid, int n, const BumpProfile& bump);

struct DatumSpec {
  BesovIndex idx;
  int n_min = 3;
  int n_max = 9;
  std::optional<int> single_n;

  /// Terms present in the datum, ascending.
  std::vector<int> terms() const;
  /// Throws std::invalid_argument on n_min > n_max, n_max > j_max, or a band
  /// outside the dealiased lattice.
  void validate(const Grid& grid, const LPSymbols& sym) const;
};

/// (f, 0, ..., 0) with f = sum over the datum terms of n^{-2} 2^{-ns} f_n.
VectorField make_u0(const GridPtr& grid, const DatumSpec& spec, const BumpProfile& bump);

struct CenterBound {
  double f0 = 0.0;          // f(0) read from the field
  double f0_formula = 0.0;  // phi(0)^d * sum of the datum weights
  double c0 = 0.0;          // |f(0)| / 2
  double delta = 0.0;       // half-width of the largest cube around 0 with |f| >= c0
};

/// Scans the physical samples of f for the largest grid-resolved cube
/// [-delta, delta]^d on which |f| >= c0. Throws std::runtime_error if only the
/// origin qualifies.
CenterBound center_value_bound(const SpectralField& f, const BumpProfile& bump, const DatumSpec& spec);

/// True if |f| >= c0 holds on the cube after refining the grid by `factor`
/// per axis (spectral interpolation).
bool verify_center_bound(const SpectralField& f, const CenterBound& bound, int factor = 2);

/// Provenance record: d, s, p, r, n_min, n_max, grid and boundary decay.
nlohmann::json datum_provenance(const Grid& grid, const DatumSpec& spec, const BumpProfile& bump);
void write_provenance(const std::filesystem::path& path, const nlohmann::json& record);

}  // namespace bep
