#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bep/field.hpp"
#include "bep/grid.hpp"

namespace bep {

/// Plateau edges of a radial smooth step: value 1 for t <= a, 0 for t >= b.
struct Transition {
  double a;
  double b;
};

inline constexpr Transition kLowPassTransition{0.75, 4.0 / 3.0};

/// h(t) = g(b - t) / (g(b - t) + g(t - a)), g(t) = exp(-1/t) for t > 0 else 0.
double smooth_step(double t, Transition tr);

/// Low-pass symbol chi(|xi|).
inline double low_pass_symbol(double radius) { return smooth_step(radius, kLowPassTransition); }

/// Sampled dyadic partition of unity on a grid.
///
/// Every lattice point with radius r stores its level J, the smallest j >= 0
/// with chi(2^{-J} r) > 0, and c = chi(2^{-J} r). Block J-1 carries c (block -1
/// is chi itself), block J carries 1 - c, every other block is zero there.
/// This is exactly the telescoped form theta_j = chi(2^{-j-1} .) - chi(2^{-j} .).
class LPSymbols {
 public:
  LPSymbols(GridPtr grid, std::vector<std::int8_t> levels, std::vector<double> weights);

  const Grid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  /// Largest block index with a nonzero symbol somewhere on the lattice.
  int j_max() const noexcept { return j_max_; }

  /// Symbol of block j at a lattice point (j = -1 is chi, j <= -2 is zero).
  double block(int j, std::size_t flat) const noexcept {
    const int level = levels_[flat];
    if (j == level - 1) return weights_[flat];
    if (j == level) return 1.0 - weights_[flat];
    return 0.0;
  }
  /// chi(2^{-j} xi) for j >= 0, zero for j <= -1 (symbol of S_j).
  double cutoff(int j, std::size_t flat) const noexcept {
    if (j < 0) return 0.0;
    const int level = levels_[flat];
    if (j < level) return 0.0;
    return j == level ? weights_[flat] : 1.0;
  }

  std::span<const std::int8_t> levels() const noexcept { return levels_; }
  std::span<const double> weights() const noexcept { return weights_; }

 private:
  GridPtr grid_;
  std::vector<std::int8_t> levels_;
  std::vector<double> weights_;
  int j_max_ = -1;
};

/// Throws std::invalid_argument if the lattice cannot hold block 1.
LPSymbols build_lp_symbols(const GridPtr& grid);

/// Delta_j u. Zero for j <= -2; throws std::out_of_range for j > j_max.
SpectralField dyadic_block(const SpectralField& u, int j, const LPSymbols& sym);
VectorField dyadic_block(const VectorField& u, int j, const LPSymbols& sym);
/// S_j u = sum of Delta_{j'} u over j' < j. Throws std::out_of_range for j > j_max + 1.
SpectralField low_freq_cutoff(const SpectralField& u, int j, const LPSymbols& sym);

/// Axis-aligned box in centered coordinates, lo[a] <= x_a <= hi[a].
struct SubBox {
  std::vector<double> lo;
  std::vector<double> hi;

  static SubBox centered_cube(int dim, double half_width);
  bool contains(std::span<const double> x) const;
};

/// Trapezoid quadrature of |u|^p (pointwise Euclidean magnitude for vectors),
/// p = infinity gives the grid maximum. Without a region and p = 2 the value
/// comes from Parseval, which equals the trapezoid sum for band-limited data.
/// Throws std::invalid_argument for p < 1 or a region holding no grid point.
double lp_norm(const SpectralField& u, double p, const std::optional<SubBox>& region = std::nullopt);
double lp_norm(const VectorField& u, double p, const std::optional<SubBox>& region = std::nullopt);
/// Same quadrature on physical samples of one or more components.
double lp_norm_samples(const Grid& grid, std::span<const RealBuffer* const> components, double p,
                       const std::optional<SubBox>& region = std::nullopt);

/// Besov triple (s, p, r) with p, r in [1, infinity].
struct BesovIndex {
  double s = 2.5;
  double p = 2.0;
  double r = 2.0;

  /// s > max(1 + d/p, 3/2), or p < 2d with r = 1 and s = 1 + d/p.
  bool admissible(int dim) const;
  /// Empty when admissible, otherwise the violated inequality spelled out.
  std::string violation(int dim) const;
  /// Throws std::invalid_argument unless p and r lie in [1, infinity].
  void validate() const;
  BesovIndex with_s(double new_s) const { return {new_s, p, r}; }
  BesovIndex with_r(double new_r) const { return {s, p, new_r}; }
};

/// ||Delta_j u||_{L^p} for j = -1 .. j_max (entry j + 1); blocks whose symbol
/// misses the support of u are exactly zero and skipped.
std::vector<double> block_norms(const SpectralField& u, double p, const LPSymbols& sym);
std::vector<double> block_norms(const VectorField& u, double p, const LPSymbols& sym);

/// l^r aggregation of 2^{js} * block norm, compensated for finite r.
double besov_from_blocks(std::span<const double> norms, double s, double r);
double besov_norm(const SpectralField& u, const BesovIndex& idx, const LPSymbols& sym);
double besov_norm(const VectorField& u, const BesovIndex& idx, const LPSymbols& sym);

struct BlockTerm {
  int j;
  double weight;  // 2^{js}
  double norm;    // ||Delta_j u||_{L^p}
  double term;    // weight * norm
};

std::vector<BlockTerm> block_profile(const VectorField& u, const BesovIndex& idx, const LPSymbols& sym);
/// Columns j, weight, lp_norm, term.
void write_block_profile_csv(std::ostream& os, std::span<const BlockTerm> rows);

/// [Delta_j, v] . grad f = Delta_j(v . grad f) - v . grad(Delta_j f), with
/// dealiased products.
SpectralField commutator(const VectorField& v, const SpectralField& f, int j, const LPSymbols& sym);

}  // namespace bep
