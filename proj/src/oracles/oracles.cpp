#include "bep/oracles.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

namespace bep::oracle {
namespace {

using Index = std::vector<std::int64_t>;

Index unflatten(const Grid& g, std::size_t flat) {
  Index k(g.dim());
  for (int a = g.dim() - 1; a >= 0; --a) {
    const auto n = static_cast<std::int64_t>(g.size(a));
    auto i = static_cast<std::int64_t>(flat % g.size(a));
    flat /= g.size(a);
    k[a] = i < n / 2 ? i : i - n;
  }
  return k;
}

bool flatten(const Grid& g, const Index& k, std::size_t& flat) {
  flat = 0;
  for (int a = 0; a < g.dim(); ++a) {
    const auto n = static_cast<std::int64_t>(g.size(a));
    if (k[a] < -n / 2 || k[a] >= n / 2) return false;
    flat = flat * g.size(a) + static_cast<std::size_t>((k[a] + n) % n);
  }
  return true;
}

double radius(const Grid& g, const Index& k) {
  double s = 0.0;
  for (int a = 0; a < g.dim(); ++a) {
    const double xi = 2.0 * std::numbers::pi * static_cast<double>(k[a]) / g.length(a);
    s += xi * xi;
  }
  return std::sqrt(s);
}

double g_exp(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

VectorField jacobian_row(const VectorField& u, int i) {
  std::vector<SpectralField> row;
  for (int j = 0; j < u.grid().dim(); ++j) row.push_back(derivative(u[i], j));
  return VectorField(std::move(row));
}

}  // namespace

double smooth_step(double t, double a, double b) {
  const double lo = g_exp(b - t);
  const double hi = g_exp(t - a);
  return lo / (lo + hi);
}

double block_symbol(int j, double r) {
  if (j < -1) return 0.0;
  if (j == -1) return smooth_step(r, 0.75, 4.0 / 3.0);
  const double outer = smooth_step(r / std::pow(2.0, j + 1), 0.75, 4.0 / 3.0);
  const double inner = smooth_step(r / std::pow(2.0, j), 0.75, 4.0 / 3.0);
  return outer - inner;
}

double bump_hat(double xi) { return smooth_step(std::abs(xi), 0.25, 0.5); }

double bump_value(double x) {
  using boost::math::quadrature::gauss_kronrod;
  // Plateau part in closed form, transition band by quadrature.
  const double plateau = x == 0.0 ? 0.25 : std::sin(0.25 * x) / x;
  auto f = [x](double xi) { return bump_hat(xi) * std::cos(x * xi); };
  const double band = gauss_kronrod<double, 61>::integrate(f, 0.25, 0.5, 15, 1e-15);
  return (plateau + band) / std::numbers::pi;
}

double bump_l2_norm() {
  using boost::math::quadrature::gauss_kronrod;
  auto f = [](double xi) { return bump_hat(xi) * bump_hat(xi); };
  const double band = gauss_kronrod<double, 61>::integrate(f, 0.25, 0.5, 15, 1e-15);
  return std::sqrt((0.25 + band) / std::numbers::pi);
}

SpectralField derivative(const SpectralField& u, int axis) {
  const Grid& g = u.grid();
  SpectralField out(u.grid_ptr());
  const auto n = static_cast<std::int64_t>(g.size(axis));
  for (std::size_t flat = 0; flat < u.size(); ++flat) {
    const Index k = unflatten(g, flat);
    if (k[axis] == -n / 2) continue;
    const double xi = 2.0 * std::numbers::pi * static_cast<double>(k[axis]) / g.length(axis);
    out[flat] = cplx(0.0, xi) * u[flat];
  }
  return out;
}

SpectralField helmholtz_inverse(const SpectralField& u) {
  SpectralField out(u.grid_ptr());
  for (std::size_t flat = 0; flat < u.size(); ++flat) {
    const double r = radius(u.grid(), unflatten(u.grid(), flat));
    out[flat] = u[flat] / (1.0 + r * r);
  }
  return out;
}

SpectralField convolve(const SpectralField& u, const SpectralField& v) {
  const Grid& g = u.grid();
  SpectralField out(u.grid_ptr());
  std::vector<std::size_t> nz_u, nz_v;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] != cplx(0.0)) nz_u.push_back(i);
    if (v[i] != cplx(0.0)) nz_v.push_back(i);
  }
  for (auto p : nz_u) {
    const Index kp = unflatten(g, p);
    for (auto q : nz_v) {
      const Index kq = unflatten(g, q);
      Index k(g.dim());
      bool kept = true;
      for (int a = 0; a < g.dim() && kept; ++a) {
        k[a] = kp[a] + kq[a];
        kept = std::llabs(k[a]) <= static_cast<std::int64_t>(g.size(a)) / 3;
      }
      std::size_t flat = 0;
      if (kept && flatten(g, k, flat)) out[flat] += u[p] * v[q];
    }
  }
  return out;
}

SpectralField dyadic_block(const SpectralField& u, int j) {
  SpectralField out(u.grid_ptr());
  for (std::size_t flat = 0; flat < u.size(); ++flat) {
    out[flat] = block_symbol(j, radius(u.grid(), unflatten(u.grid(), flat))) * u[flat];
  }
  return out;
}

VectorField convective(const VectorField& u, const VectorField& v) {
  const int d = u.grid().dim();
  VectorField out(u.grid_ptr(), d);
  for (int i = 0; i < d; ++i) {
    for (int k = 0; k < d; ++k) out[i] += convolve(u[k], derivative(v[i], k));
  }
  return out;
}

VectorField q_bilinear(const VectorField& u, const VectorField& v) {
  const int d = u.grid().dim();
  // gu[i][j] = d_j u_i
  std::vector<VectorField> gu, gv;
  for (int i = 0; i < d; ++i) {
    gu.push_back(jacobian_row(u, i));
    gv.push_back(jacobian_row(v, i));
  }
  SpectralField div_u(u.grid_ptr());
  for (int k = 0; k < d; ++k) div_u += gu[k][k];
  SpectralField colon(u.grid_ptr());
  for (int k = 0; k < d; ++k) {
    for (int l = 0; l < d; ++l) colon += convolve(gu[k][l], gv[k][l]);
  }
  VectorField out(u.grid_ptr(), d);
  for (int i = 0; i < d; ++i) {
    SpectralField div_row(u.grid_ptr());
    for (int j = 0; j < d; ++j) {
      SpectralField m(u.grid_ptr());
      for (int k = 0; k < d; ++k) {
        m += convolve(gu[i][k], gv[k][j]);
        m += convolve(gu[i][k], gv[j][k]);
        m -= convolve(gu[k][i], gv[k][j]);
      }
      m -= convolve(div_u, gv[i][j]);
      if (i == j) m.axpy(0.5, colon);
      div_row += derivative(m, j);
    }
    out[i] = helmholtz_inverse(div_row);
    out[i] *= -1.0;
  }
  return out;
}

VectorField r_bilinear(const VectorField& u, const VectorField& v) {
  const int d = u.grid().dim();
  SpectralField div_u(u.grid_ptr());
  for (int k = 0; k < d; ++k) div_u += derivative(u[k], k);
  VectorField out(u.grid_ptr(), d);
  for (int i = 0; i < d; ++i) {
    SpectralField acc = convolve(div_u, v[i]);
    for (int j = 0; j < d; ++j) acc += convolve(derivative(u[j], i), v[j]);
    out[i] = helmholtz_inverse(acc);
    out[i] *= -1.0;
  }
  return out;
}

SpectralField commutator(const VectorField& v, const SpectralField& f, int j) {
  const int d = f.grid().dim();
  SpectralField transport(f.grid_ptr());
  SpectralField frozen(f.grid_ptr());
  const SpectralField fj = dyadic_block(f, j);
  for (int k = 0; k < d; ++k) {
    transport += convolve(v[k], derivative(f, k));
    frozen += convolve(v[k], derivative(fj, k));
  }
  return dyadic_block(transport, j) - frozen;
}

}  // namespace bep::oracle
