#include "bep/spectral_ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "detail/fft.hpp"

namespace bep {

SpectralField to_spectral(const GridPtr& grid, std::span<const double> samples) {
  if (samples.size() != grid->total()) {
    throw std::invalid_argument("to_spectral: sample count " + std::to_string(samples.size()) +
                                " does not match grid size " + std::to_string(grid->total()));
  }
  SpectralField out(grid);
  ComplexBuffer work;
  detail::real_pair_to_spectral(*grid, samples.data(), nullptr, out.coeffs().data(), nullptr, work);
  return out;
}

RealBuffer to_physical(const SpectralField& u) {
  RealBuffer out(u.size());
  ComplexBuffer work;
  detail::spectral_pair_to_real(u.grid(), u.coeffs().data(), nullptr, out.data(), nullptr, work);
  return out;
}

std::vector<RealBuffer> to_physical(const VectorField& v) {
  std::vector<RealBuffer> out(v.components(), RealBuffer(v.grid().total()));
  ComplexBuffer work;
  for (int i = 0; i < v.components(); i += 2) {
    const bool pair = i + 1 < v.components();
    detail::spectral_pair_to_real(v.grid(), v[i].coeffs().data(),
                                  pair ? v[i + 1].coeffs().data() : nullptr, out[i].data(),
                                  pair ? out[i + 1].data() : nullptr, work);
  }
  return out;
}

double imaginary_leakage(const SpectralField& u) {
  ComplexBuffer work(u.coeffs().begin(), u.coeffs().end());
  detail::execute_backward(u.grid(), work.data());
  double re = 0.0, im = 0.0;
  for (const auto& z : work) {
    re = std::max(re, std::abs(z.real()));
    im = std::max(im, std::abs(z.imag()));
  }
  return re > 0.0 ? im / re : im;
}

double value_at_origin(const SpectralField& u) {
  double s = 0.0;
  for (const auto& c : u.coeffs()) s += c.real();
  return s;
}

SpectralField partial_derivative(const SpectralField& u, int axis) {
  const Grid& g = u.grid();
  if (axis < 0 || axis >= g.dim()) {
    throw std::out_of_range("partial_derivative: axis " + std::to_string(axis) +
                            " outside [0, " + std::to_string(g.dim()) + ")");
  }
  const double nyquist = -static_cast<double>(g.size(axis) / 2) * g.frequency_step(axis);
  SpectralField out(u.grid_ptr());
  auto src = u.coeffs();
  auto dst = out.coeffs();
  for_each_frequency(g, [&](std::size_t flat, std::span<const double> xi) {
    const double k = xi[axis];
    dst[flat] = (k == nyquist) ? cplx(0.0) : cplx(0.0, k) * src[flat];
  });
  return out;
}

VectorField gradient(const SpectralField& u) {
  std::vector<SpectralField> comps;
  comps.reserve(u.grid().dim());
  for (int a = 0; a < u.grid().dim(); ++a) comps.push_back(partial_derivative(u, a));
  return VectorField(std::move(comps));
}

SpectralField divergence(const VectorField& v) {
  if (v.components() != v.grid().dim()) {
    throw std::invalid_argument("divergence: component count must equal the grid dimension");
  }
  SpectralField out = partial_derivative(v[0], 0);
  for (int a = 1; a < v.components(); ++a) out += partial_derivative(v[a], a);
  return out;
}

namespace {

double norm2(std::span<const double> xi) {
  double s = 0.0;
  for (double x : xi) s += x * x;
  return s;
}

}  // namespace

SpectralField laplacian(const SpectralField& u) {
  return apply_multiplier(u, [](std::span<const double> xi) { return -norm2(xi); });
}

SpectralField helmholtz_inverse(const SpectralField& u) {
  return apply_multiplier(u, [](std::span<const double> xi) { return 1.0 / (1.0 + norm2(xi)); });
}

SpectralField helmholtz_forward(const SpectralField& u) {
  return apply_multiplier(u, [](std::span<const double> xi) { return 1.0 + norm2(xi); });
}

VectorField helmholtz_inverse(const VectorField& v) {
  std::vector<SpectralField> comps;
  for (const auto& c : v) comps.push_back(helmholtz_inverse(c));
  return VectorField(std::move(comps));
}

VectorField helmholtz_forward(const VectorField& v) {
  std::vector<SpectralField> comps;
  for (const auto& c : v) comps.push_back(helmholtz_forward(c));
  return VectorField(std::move(comps));
}

namespace {

/// Per-axis keep masks for the 2/3 rule.
std::vector<std::vector<char>> keep_masks(const Grid& g) {
  std::vector<std::vector<char>> keep(g.dim());
  for (int a = 0; a < g.dim(); ++a) {
    keep[a].resize(g.size(a));
    const auto cut = g.dealias_cutoff(a);
    for (std::size_t i = 0; i < g.size(a); ++i) keep[a][i] = std::abs(g.wavenumber(a, i)) <= cut;
  }
  return keep;
}

template <class Fn>
void for_each_truncated(const Grid& g, Fn&& fn) {
  const auto keep = keep_masks(g);
  const int d = g.dim();
  std::vector<std::size_t> idx(d, 0);
  for (std::size_t flat = 0; flat < g.total(); ++flat) {
    bool kept = true;
    for (int a = 0; a < d && kept; ++a) kept = keep[a][idx[a]] != 0;
    if (!kept) fn(flat);
    for (int a = d - 1; a >= 0; --a) {
      if (++idx[a] < g.size(a)) break;
      idx[a] = 0;
    }
  }
}

}  // namespace

void dealias_in_place(SpectralField& u) {
  auto c = u.coeffs();
  for_each_truncated(u.grid(), [&](std::size_t flat) { c[flat] = 0.0; });
}

SpectralField dealias(const SpectralField& u) {
  SpectralField out = u;
  dealias_in_place(out);
  return out;
}

VectorField dealias(const VectorField& v) {
  VectorField out = v;
  for (int i = 0; i < out.components(); ++i) dealias_in_place(out[i]);
  return out;
}

bool is_dealiased(const SpectralField& u, double tol) {
  const double bound = tol * u.max_abs();
  bool ok = true;
  auto c = u.coeffs();
  for_each_truncated(u.grid(), [&](std::size_t flat) {
    if (std::abs(c[flat]) > bound) ok = false;
  });
  return ok;
}

SpectralField pointwise_product(const SpectralField& u, const SpectralField& v) {
  require_same_grid(u.grid(), v.grid(), "pointwise_product");
  const Grid& g = u.grid();
  RealBuffer pu(g.total()), pv(g.total());
  ComplexBuffer work;
  detail::spectral_pair_to_real(g, u.coeffs().data(), v.coeffs().data(), pu.data(), pv.data(), work);
  for (std::size_t i = 0; i < pu.size(); ++i) pu[i] *= pv[i];
  SpectralField out(u.grid_ptr());
  detail::real_pair_to_spectral(g, pu.data(), nullptr, out.coeffs().data(), nullptr, work);
  dealias_in_place(out);
  return out;
}

SpectralField resample(const SpectralField& u, const GridPtr& target) {
  const Grid& src = u.grid();
  const Grid& dst = *target;
  if (src.dim() != dst.dim() || src.lengths() != dst.lengths()) {
    throw std::invalid_argument("resample: grids must share dimension and lengths");
  }
  for (int a = 0; a < src.dim(); ++a) {
    if (dst.size(a) < src.size(a)) throw std::invalid_argument("resample: target is coarser");
  }
  SpectralField out(target);
  const int d = src.dim();
  std::vector<std::size_t> idx(d, 0);
  for (std::size_t flat = 0; flat < src.total(); ++flat) {
    const cplx c = u[flat];
    if (c != cplx(0.0)) {
      // Expand over the +-N/2 images of Nyquist indices.
      std::vector<std::vector<std::int64_t>> choices(d);
      double share = 1.0;
      for (int a = 0; a < d; ++a) {
        const auto k = src.wavenumber(a, idx[a]);
        const auto half = static_cast<std::int64_t>(src.size(a) / 2);
        if (k == -half && dst.size(a) > src.size(a)) {
          choices[a] = {-half, half};
          share *= 0.5;
        } else {
          choices[a] = {k};
        }
      }
      std::vector<std::size_t> pick(d, 0);
      while (true) {
        std::size_t target_flat = 0;
        for (int a = 0; a < d; ++a) {
          const auto n = static_cast<std::int64_t>(dst.size(a));
          target_flat = target_flat * dst.size(a) + static_cast<std::size_t>((choices[a][pick[a]] + n) % n);
        }
        out[target_flat] += share * c;
        int a = d - 1;
        for (; a >= 0; --a) {
          if (++pick[a] < choices[a].size()) break;
          pick[a] = 0;
        }
        if (a < 0) break;
      }
    }
    for (int a = d - 1; a >= 0; --a) {
      if (++idx[a] < src.size(a)) break;
      idx[a] = 0;
    }
  }
  return out;
}

std::vector<std::size_t> band_indices(const Grid& grid, std::span<const std::int64_t> limit) {
  std::vector<std::size_t> out;
  const int d = grid.dim();
  std::vector<std::size_t> idx(d, 0);
  for (std::size_t flat = 0; flat < grid.total(); ++flat) {
    bool in = true;
    for (int a = 0; a < d && in; ++a) in = std::abs(grid.wavenumber(a, idx[a])) <= limit[a];
    if (in) out.push_back(flat);
    for (int a = d - 1; a >= 0; --a) {
      if (++idx[a] < grid.size(a)) break;
      idx[a] = 0;
    }
  }
  return out;
}

}  // namespace bep
