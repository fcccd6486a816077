#include "bep/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "bep/spectral_ops.hpp"
#include "bep/summation.hpp"
#include "detail/fft.hpp"

namespace bep {

double smooth_step(double t, Transition tr) {
  const double lo = (tr.b - t) > 0.0 ? std::exp(-1.0 / (tr.b - t)) : 0.0;
  const double hi = (t - tr.a) > 0.0 ? std::exp(-1.0 / (t - tr.a)) : 0.0;
  return lo / (lo + hi);
}

LPSymbols::LPSymbols(GridPtr grid, std::vector<std::int8_t> levels, std::vector<double> weights)
    : grid_(std::move(grid)), levels_(std::move(levels)), weights_(std::move(weights)) {
  if (levels_.size() != grid_->total() || weights_.size() != grid_->total()) {
    throw std::invalid_argument("LPSymbols: table size does not match grid");
  }
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    j_max_ = std::max(j_max_, weights_[i] < 1.0 ? int{levels_[i]} : levels_[i] - 1);
  }
}

LPSymbols build_lp_symbols(const GridPtr& grid) {
  std::vector<std::int8_t> levels(grid->total());
  std::vector<double> weights(grid->total());
  for_each_frequency(*grid, [&](std::size_t flat, std::span<const double> xi) {
    double r2 = 0.0;
    for (double x : xi) r2 += x * x;
    const double r = std::sqrt(r2);
    // Smallest J >= 0 with 2^{-J} r < 4/3.
    int level = 0;
    if (r >= kLowPassTransition.b) {
      level = std::max(0, static_cast<int>(std::floor(std::log2(r / kLowPassTransition.b))));
      while (level > 0 && std::ldexp(r, -(level - 1)) < kLowPassTransition.b) --level;
      while (std::ldexp(r, -level) >= kLowPassTransition.b) ++level;
    }
    levels[flat] = static_cast<std::int8_t>(level);
    weights[flat] = low_pass_symbol(std::ldexp(r, -level));
  });
  LPSymbols sym(grid, std::move(levels), std::move(weights));
  if (sym.j_max() < 1) {
    throw std::invalid_argument("build_lp_symbols: lattice too coarse, largest block " +
                                std::to_string(sym.j_max()) + " < 1");
  }
  return sym;
}

SpectralField dyadic_block(const SpectralField& u, int j, const LPSymbols& sym) {
  require_same_grid(u.grid(), sym.grid(), "dyadic_block");
  if (j > sym.j_max()) {
    throw std::out_of_range("dyadic_block: j = " + std::to_string(j) + " exceeds j_max = " +
                            std::to_string(sym.j_max()));
  }
  SpectralField out(u.grid_ptr());
  if (j < -1) return out;
  auto src = u.coeffs();
  auto dst = out.coeffs();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = sym.block(j, i) * src[i];
  return out;
}

VectorField dyadic_block(const VectorField& u, int j, const LPSymbols& sym) {
  std::vector<SpectralField> comps;
  for (const auto& c : u) comps.push_back(dyadic_block(c, j, sym));
  return VectorField(std::move(comps));
}

SpectralField low_freq_cutoff(const SpectralField& u, int j, const LPSymbols& sym) {
  require_same_grid(u.grid(), sym.grid(), "low_freq_cutoff");
  if (j > sym.j_max() + 1) {
    throw std::out_of_range("low_freq_cutoff: j = " + std::to_string(j) + " exceeds j_max + 1 = " +
                            std::to_string(sym.j_max() + 1));
  }
  SpectralField out(u.grid_ptr());
  auto src = u.coeffs();
  auto dst = out.coeffs();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = sym.cutoff(j, i) * src[i];
  return out;
}

SubBox SubBox::centered_cube(int dim, double half_width) {
  return SubBox{std::vector<double>(dim, -half_width), std::vector<double>(dim, half_width)};
}

bool SubBox::contains(std::span<const double> x) const {
  for (std::size_t a = 0; a < x.size(); ++a) {
    if (x[a] < lo[a] || x[a] > hi[a]) return false;
  }
  return true;
}

namespace {

void check_exponent(double p, const char* where) {
  if (!(p >= 1.0)) throw std::invalid_argument(std::string(where) + ": exponent must be >= 1");
}

std::vector<RealBuffer> physical_components(std::span<const SpectralField* const> comps) {
  std::vector<RealBuffer> out;
  out.reserve(comps.size());
  ComplexBuffer work;
  const Grid& g = comps.front()->grid();
  for (std::size_t i = 0; i < comps.size(); ++i) out.emplace_back(g.total());
  for (std::size_t i = 0; i < comps.size(); i += 2) {
    const bool pair = i + 1 < comps.size();
    detail::spectral_pair_to_real(g, comps[i]->coeffs().data(),
                                  pair ? comps[i + 1]->coeffs().data() : nullptr, out[i].data(),
                                  pair ? out[i + 1].data() : nullptr, work);
  }
  return out;
}

double norm_of(std::span<const SpectralField* const> comps, double p,
               const std::optional<SubBox>& region) {
  check_exponent(p, "lp_norm");
  const Grid& g = comps.front()->grid();
  if (p == 2.0 && !region) {
    CompensatedSum sum;
    for (const auto* c : comps) {
      for (const auto& z : c->coeffs()) sum.add(std::norm(z));
    }
    return std::sqrt(g.volume() * sum.value());
  }
  const auto phys = physical_components(comps);
  std::vector<const RealBuffer*> ptrs;
  for (const auto& b : phys) ptrs.push_back(&b);
  return lp_norm_samples(g, ptrs, p, region);
}

}  // namespace

double lp_norm_samples(const Grid& grid, std::span<const RealBuffer* const> components, double p,
                       const std::optional<SubBox>& region) {
  check_exponent(p, "lp_norm");
  const bool inf = std::isinf(p);
  CompensatedSum sum;
  double max_mag = 0.0;
  std::size_t count = 0;
  auto visit = [&](std::size_t flat) {
    double m2 = 0.0;
    for (const auto* c : components) m2 += (*c)[flat] * (*c)[flat];
    ++count;
    if (inf) {
      max_mag = std::max(max_mag, m2);
    } else if (p == 2.0) {
      sum.add(m2);
    } else {
      sum.add(std::pow(m2, 0.5 * p));
    }
  };
  if (region) {
    if (region->lo.size() != static_cast<std::size_t>(grid.dim()) ||
        region->hi.size() != static_cast<std::size_t>(grid.dim())) {
      throw std::invalid_argument("lp_norm: region dimension does not match grid");
    }
    for_each_point(grid, [&](std::size_t flat, std::span<const double> x) {
      if (region->contains(x)) visit(flat);
    });
    if (count == 0) throw std::invalid_argument("lp_norm: region contains no grid point");
  } else {
    for (std::size_t i = 0; i < grid.total(); ++i) visit(i);
  }
  if (inf) return std::sqrt(max_mag);
  return std::pow(sum.value() * grid.cell_volume(), 1.0 / p);
}

double lp_norm(const SpectralField& u, double p, const std::optional<SubBox>& region) {
  const SpectralField* ptr = &u;
  return norm_of(std::span<const SpectralField* const>(&ptr, 1), p, region);
}

double lp_norm(const VectorField& u, double p, const std::optional<SubBox>& region) {
  std::vector<const SpectralField*> ptrs;
  for (const auto& c : u) ptrs.push_back(&c);
  return norm_of(ptrs, p, region);
}

void BesovIndex::validate() const {
  if (!(p >= 1.0) || !(r >= 1.0)) {
    throw std::invalid_argument("BesovIndex: p and r must lie in [1, inf]");
  }
  if (!std::isfinite(s)) throw std::invalid_argument("BesovIndex: s must be finite");
}

std::string BesovIndex::violation(int dim) const {
  const double d = dim;
  const double critical = 1.0 + d / p;
  const double bound = std::max(critical, 1.5);
  // s within rounding of 1 + d/p is the endpoint case, never the open one.
  const double tol = 1e-12 * std::max(1.0, std::abs(critical));
  const bool endpoint = std::abs(s - critical) <= tol;
  if (!endpoint && s > bound) return {};
  if (endpoint && p < 2.0 * d && r == 1.0) return {};
  std::ostringstream os;
  os.precision(6);
  if (endpoint) {
    if (!(p < 2.0 * d)) {
      os << "endpoint s = 1 + d/p requires p < 2d, got p = " << p << " >= " << 2.0 * d;
    } else {
      os << "endpoint s = 1 + d/p requires r = 1, got r = " << r;
    }
  } else if (s <= critical) {
    os << "s <= 1 + d/p: " << s << " <= " << critical;
  } else {
    os << "s <= 3/2: " << s << " <= 1.5";
  }
  return os.str();
}

bool BesovIndex::admissible(int dim) const { return violation(dim).empty(); }

namespace {

template <class Comps>
std::vector<double> block_norms_impl(const Comps& comps, double p, const LPSymbols& sym) {
  check_exponent(p, "block_norms");
  const int jmax = sym.j_max();
  const std::size_t nblocks = static_cast<std::size_t>(jmax) + 2;
  // Energy per block in one pass; doubles as the support test.
  std::vector<CompensatedSum> energy(nblocks);
  for (const SpectralField* c : comps) {
    require_same_grid(c->grid(), sym.grid(), "block_norms");
    auto co = c->coeffs();
    auto levels = sym.levels();
    auto weights = sym.weights();
    for (std::size_t i = 0; i < co.size(); ++i) {
      const double e = std::norm(co[i]);
      if (e == 0.0) continue;
      const int level = levels[i];
      const double w = weights[i];
      // Block level-1 sits at index level, block level at index level+1.
      if (w != 0.0) energy[level].add(w * w * e);
      if (w != 1.0) energy[level + 1].add((1.0 - w) * (1.0 - w) * e);
    }
  }
  std::vector<double> out(nblocks, 0.0);
  const double volume = sym.grid().volume();
  for (std::size_t b = 0; b < nblocks; ++b) {
    const double e = energy[b].value();
    if (e == 0.0) continue;
    if (p == 2.0) {
      out[b] = std::sqrt(volume * e);
      continue;
    }
    std::vector<SpectralField> blocks;
    std::vector<const SpectralField*> ptrs;
    for (const SpectralField* c : comps) blocks.push_back(dyadic_block(*c, static_cast<int>(b) - 1, sym));
    for (const auto& f : blocks) ptrs.push_back(&f);
    out[b] = norm_of(ptrs, p, std::nullopt);
  }
  return out;
}

}  // namespace

std::vector<double> block_norms(const SpectralField& u, double p, const LPSymbols& sym) {
  std::vector<const SpectralField*> comps{&u};
  return block_norms_impl(comps, p, sym);
}

std::vector<double> block_norms(const VectorField& u, double p, const LPSymbols& sym) {
  std::vector<const SpectralField*> comps;
  for (const auto& c : u) comps.push_back(&c);
  return block_norms_impl(comps, p, sym);
}

double besov_from_blocks(std::span<const double> norms, double s, double r) {
  if (!(r >= 1.0)) throw std::invalid_argument("besov_from_blocks: r must be >= 1");
  if (std::isinf(r)) {
    double m = 0.0;
    for (std::size_t b = 0; b < norms.size(); ++b) {
      m = std::max(m, std::exp2(s * (static_cast<double>(b) - 1.0)) * norms[b]);
    }
    return m;
  }
  CompensatedSum sum;
  for (std::size_t b = 0; b < norms.size(); ++b) {
    if (norms[b] == 0.0) continue;
    const double term = std::exp2(s * (static_cast<double>(b) - 1.0)) * norms[b];
    sum.add(r == 2.0 ? term * term : std::pow(term, r));
  }
  return r == 2.0 ? std::sqrt(sum.value()) : std::pow(sum.value(), 1.0 / r);
}

double besov_norm(const SpectralField& u, const BesovIndex& idx, const LPSymbols& sym) {
  return besov_from_blocks(block_norms(u, idx.p, sym), idx.s, idx.r);
}

double besov_norm(const VectorField& u, const BesovIndex& idx, const LPSymbols& sym) {
  return besov_from_blocks(block_norms(u, idx.p, sym), idx.s, idx.r);
}

std::vector<BlockTerm> block_profile(const VectorField& u, const BesovIndex& idx, const LPSymbols& sym) {
  const auto norms = block_norms(u, idx.p, sym);
  std::vector<BlockTerm> rows;
  for (std::size_t b = 0; b < norms.size(); ++b) {
    const int j = static_cast<int>(b) - 1;
    const double w = std::exp2(idx.s * j);
    rows.push_back({j, w, norms[b], w * norms[b]});
  }
  return rows;
}

void write_block_profile_csv(std::ostream& os, std::span<const BlockTerm> rows) {
  const auto old = os.precision(17);
  os << "j,weight,lp_norm,term\n";
  for (const auto& r : rows) os << r.j << ',' << r.weight << ',' << r.norm << ',' << r.term << '\n';
  os.precision(old);
}

SpectralField commutator(const VectorField& v, const SpectralField& f, int j, const LPSymbols& sym) {
  require_same_grid(v.grid(), f.grid(), "commutator");
  const int d = f.grid().dim();
  const SpectralField fj = dyadic_block(f, j, sym);
  SpectralField transport(f.grid_ptr());
  SpectralField frozen(f.grid_ptr());
  for (int k = 0; k < d; ++k) {
    transport += pointwise_product(v[k], partial_derivative(f, k));
    frozen += pointwise_product(v[k], partial_derivative(fj, k));
  }
  return dyadic_block(transport, j, sym) - frozen;
}

}  // namespace bep
