#include "bep/profile_builder.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "bep/errors.hpp"
#include "bep/spectral_ops.hpp"

namespace bep {

double carrier_frequency(int n) { return 17.0 / 12.0 * std::ldexp(1.0, n); }

double aligned_box_length(int q) { return 24.0 * std::numbers::pi * q / 17.0; }

double datum_weight(int n, double s) {
  const double nn = static_cast<double>(n);
  return std::exp2(-nn * s) / (nn * nn);
}

BumpProfile build_bump(const GridPtr& axis_grid, double decay_tol) {
  if (axis_grid->dim() != 1) throw std::invalid_argument("build_bump: axis grid must be 1-D");
  const Grid& g = *axis_grid;
  const double top = static_cast<double>(g.size(0) / 2 - 1) * g.frequency_step(0);
  if (top < kBumpTransition.b) {
    throw std::invalid_argument("build_bump: axis does not resolve |xi| = 1/2");
  }
  BumpProfile b;
  b.axis_grid = axis_grid;
  b.hat_samples.resize(g.size(0));
  SpectralField coeffs(axis_grid);
  for (std::size_t i = 0; i < g.size(0); ++i) {
    const double h = bump_hat(g.frequency(0, i));
    b.hat_samples[i] = h;
    coeffs[i] = h / g.length(0);
  }
  const auto phys = to_physical(coeffs);
  b.phys_samples.assign(phys.begin(), phys.end());
  b.phi0 = value_at_origin(coeffs);
  const double edge = 0.45 * g.length(0);
  for (std::size_t i = 0; i < g.size(0); ++i) {
    if (std::abs(g.coordinate(0, i)) >= edge) {
      b.boundary_decay = std::max(b.boundary_decay, std::abs(b.phys_samples[i]));
    }
  }
  if (!(b.boundary_decay < decay_tol)) {
    throw InfeasibleError("build_bump: boundary decay " + std::to_string(b.boundary_decay) +
                          " >= tolerance " + std::to_string(decay_tol) + " (box too small)");
  }
  return b;
}

namespace {

void check_band(const Grid& g, int n, const char* where) {
  const double edge = carrier_frequency(n) + kBumpTransition.b;
  if (edge > g.dealias_frequency(0)) {
    throw std::invalid_argument(std::string(where) + ": band of n = " + std::to_string(n) +
                                " reaches " + std::to_string(edge) + " beyond the dealiased axis-0 limit " +
                                std::to_string(g.dealias_frequency(0)));
  }
  for (int a = 1; a < g.dim(); ++a) {
    if (kBumpTransition.b > g.dealias_frequency(a)) {
      throw std::invalid_argument(std::string(where) + ": transverse axis " + std::to_string(a) +
                                  " does not resolve |xi| = 1/2 after dealiasing");
    }
  }
}

/// Fills coefficients from a per-point formula in the axis-0 frequency times
/// the transverse bump product, skipping points where the latter vanishes.
template <class Axis0>
SpectralField separable(const GridPtr& grid, Axis0&& axis0) {
  const Grid& g = *grid;
  double norm = 1.0;
  for (int a = 0; a < g.dim(); ++a) norm /= g.length(a);
  SpectralField out(grid);
  for_each_frequency(g, [&](std::size_t flat, std::span<const double> xi) {
    double transverse = norm;
    for (std::size_t a = 1; a < xi.size() && transverse != 0.0; ++a) transverse *= bump_hat(xi[a]);
    if (transverse != 0.0) out[flat] = transverse * axis0(xi[0]);
  });
  return out;
}

}  // namespace

SpectralField make_fn(const GridPtr& grid, int n, const BumpProfile& bump) {
  check_band(*grid, n, "make_fn");
  const double a = carrier_frequency(n);
  return separable(grid, [&](double x) { return cplx(0.5 * (bump.hat(x - a) + bump.hat(x + a))); });
}

SpectralField fn_cos_part(const GridPtr& grid, int n, const BumpProfile& bump) {
  check_band(*grid, n, "fn_cos_part");
  const double a = carrier_frequency(n);
  return separable(grid, [&](double x) {
    return cplx(0.0, 0.5 * ((x - a) * bump.hat(x - a) + (x + a) * bump.hat(x + a)));
  });
}

SpectralField fn_sin_part(const GridPtr& grid, int n, const BumpProfile& bump) {
  check_band(*grid, n, "fn_sin_part");
  const double a = carrier_frequency(n);
  // (hat(x - a) - hat(x + a)) / (2i)
  return separable(grid, [&](double x) { return cplx(0.0, -0.5 * (bump.hat(x - a) - bump.hat(x + a))); });
}

std::vector<int> DatumSpec::terms() const {
  if (single_n) return {*single_n};
  std::vector<int> out;
  for (int n = n_min; n <= n_max; ++n) out.push_back(n);
  return out;
}

void DatumSpec::validate(const Grid& grid, const LPSymbols& sym) const {
  if (n_min < 1) throw std::invalid_argument("DatumSpec: n_min must be >= 1");
  if (n_min > n_max) {
    throw std::invalid_argument("DatumSpec: n_min = " + std::to_string(n_min) + " > n_max = " +
                                std::to_string(n_max));
  }
  if (single_n && (*single_n < n_min || *single_n > n_max)) {
    throw std::invalid_argument("DatumSpec: single_n outside [n_min, n_max]");
  }
  if (n_max > sym.j_max()) {
    throw std::invalid_argument("DatumSpec: n_max = " + std::to_string(n_max) + " exceeds j_max = " +
                                std::to_string(sym.j_max()));
  }
  for (int n : terms()) check_band(grid, n, "DatumSpec");
}

VectorField make_u0(const GridPtr& grid, const DatumSpec& spec, const BumpProfile& bump) {
  const auto terms = spec.terms();
  if (terms.empty() || terms.front() < 1) throw std::invalid_argument("make_u0: empty datum");
  for (int n : terms) check_band(*grid, n, "make_u0");
  std::vector<double> carriers, weights;
  for (int n : terms) {
    carriers.push_back(carrier_frequency(n));
    weights.push_back(datum_weight(n, spec.idx.s));
  }
  VectorField u(grid, grid->dim());
  u[0] = separable(grid, [&](double x) {
    double acc = 0.0;
    for (std::size_t t = 0; t < carriers.size(); ++t) {
      const double a = carriers[t];
      if (std::abs(std::abs(x) - a) >= kBumpTransition.b) continue;
      acc += weights[t] * 0.5 * (bump.hat(x - a) + bump.hat(x + a));
    }
    return cplx(acc);
  });
  return u;
}

namespace {

double cube_radius(std::span<const double> x) {
  double r = 0.0;
  for (double v : x) r = std::max(r, std::abs(v));
  return r;
}

}  // namespace

CenterBound center_value_bound(const SpectralField& f, const BumpProfile& bump, const DatumSpec& spec) {
  const Grid& g = f.grid();
  CenterBound b;
  b.f0 = value_at_origin(f);
  double weights = 0.0;
  for (int n : spec.terms()) weights += datum_weight(n, spec.idx.s);
  b.f0_formula = std::pow(bump.phi0, g.dim()) * weights;
  b.c0 = 0.5 * std::abs(b.f0);
  const auto phys = to_physical(f);
  double fail = std::numeric_limits<double>::infinity();
  for_each_point(g, [&](std::size_t flat, std::span<const double> x) {
    if (std::abs(phys[flat]) < b.c0) fail = std::min(fail, cube_radius(x));
  });
  for_each_point(g, [&](std::size_t, std::span<const double> x) {
    const double r = cube_radius(x);
    if (r < fail) b.delta = std::max(b.delta, r);
  });
  if (!(b.delta > 0.0)) {
    throw std::runtime_error("center_value_bound: no positive delta with |f| >= c0");
  }
  return b;
}

bool verify_center_bound(const SpectralField& f, const CenterBound& bound, int factor) {
  const Grid& g = f.grid();
  std::vector<std::size_t> sizes(g.dim());
  for (int a = 0; a < g.dim(); ++a) sizes[a] = g.size(a) * static_cast<std::size_t>(factor);
  auto fine = make_grid(g.dim(), g.lengths(), sizes);
  const auto phys = to_physical(resample(f, fine));
  const double eps = 1e-12 * bound.delta;
  bool ok = true;
  for_each_point(*fine, [&](std::size_t flat, std::span<const double> x) {
    if (cube_radius(x) <= bound.delta + eps && std::abs(phys[flat]) < bound.c0) ok = false;
  });
  return ok;
}

nlohmann::json datum_provenance(const Grid& grid, const DatumSpec& spec, const BumpProfile& bump) {
  nlohmann::json j;
  j["d"] = grid.dim();
  j["s"] = spec.idx.s;
  j["p"] = spec.idx.p;
  j["r"] = spec.idx.r;
  j["n_min"] = spec.n_min;
  j["n_max"] = spec.n_max;
  if (spec.single_n) j["single_n"] = *spec.single_n;
  j["grid"] = {{"sizes", grid.sizes()}, {"lengths", grid.lengths()}};
  j["boundary_decay"] = bump.boundary_decay;
  j["bump_axis"] = {{"size", bump.axis_grid->size(0)}, {"length", bump.axis_grid->length(0)}};
  return j;
}

void write_provenance(const std::filesystem::path& path, const nlohmann::json& record) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_provenance: cannot open " + path.string());
  os << record.dump(2) << '\n';
}

}  // namespace bep
