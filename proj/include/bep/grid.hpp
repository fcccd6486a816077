#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace bep {

namespace detail {
struct FftPlans;
}

/// Periodic box [-L_i/2, L_i/2) sampled with N_i points per axis.
///
/// Storage is row-major with axis 0 slowest. Coefficients use FFT ordering:
/// index i on an axis holds wavenumber k = i for i < N/2 and k = i - N
/// otherwise, so the lattice is {-N/2, ..., N/2 - 1} and the single Nyquist
/// mode sits at k = -N/2. The angular frequency of wavenumber k on axis a is
/// k * 2*pi / L_a.
class Grid {
 public:
  Grid(std::vector<double> lengths, std::vector<std::size_t> sizes);

  int dim() const noexcept { return static_cast<int>(sizes_.size()); }
  const std::vector<std::size_t>& sizes() const noexcept { return sizes_; }
  const std::vector<double>& lengths() const noexcept { return lengths_; }
  std::size_t size(int axis) const { return sizes_.at(axis); }
  double length(int axis) const { return lengths_.at(axis); }

  /// Total number of lattice points.
  std::size_t total() const noexcept { return total_; }
  std::size_t stride(int axis) const { return strides_.at(axis); }

  double spacing(int axis) const;
  double min_spacing() const;
  /// 2*pi / L_a.
  double frequency_step(int axis) const;
  double cell_volume() const;
  double volume() const;

  /// Signed wavenumber of storage index i on the given axis.
  std::int64_t wavenumber(int axis, std::size_t i) const;
  double frequency(int axis, std::size_t i) const;
  /// All angular frequencies of one axis in storage order.
  const std::vector<double>& axis_frequencies(int axis) const { return freqs_.at(axis); }
  /// Centered physical coordinate of sample i: i*dx for i < N/2, (i-N)*dx otherwise.
  double coordinate(int axis, std::size_t i) const;

  /// Largest retained |k| under the 2/3 rule (modes with |k| > N/3 are zeroed).
  std::int64_t dealias_cutoff(int axis) const;
  /// Largest retained angular frequency on an axis.
  double dealias_frequency(int axis) const;

  /// Storage index of -k for the storage index of k, per axis.
  const std::vector<std::size_t>& axis_mirror(int axis) const { return mirror_.at(axis); }
  std::size_t mirror_flat(std::size_t flat) const;

  /// Canonical text description; equal grids produce equal keys.
  std::string key() const;

  bool operator==(const Grid& other) const noexcept {
    return sizes_ == other.sizes_ && lengths_ == other.lengths_;
  }

  const detail::FftPlans& plans() const { return *plans_; }

 private:
  std::vector<double> lengths_;
  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> strides_;
  std::size_t total_ = 0;
  std::vector<std::vector<double>> freqs_;
  std::vector<std::vector<std::size_t>> mirror_;
  std::shared_ptr<const detail::FftPlans> plans_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Validated construction. Throws std::invalid_argument for dim < 1, a size
/// that is not a power of two (or is below 4), a non-positive length, or
/// per-axis vectors whose length differs from dim.
GridPtr make_grid(int dim, std::vector<double> lengths, std::vector<std::size_t> sizes);

bool same_grid(const Grid& a, const Grid& b) noexcept;

/// Visits every lattice point with its flat index and per-axis angular
/// frequencies, in storage order.
template <class Fn>
void for_each_frequency(const Grid& grid, Fn&& fn) {
  const int d = grid.dim();
  std::vector<std::size_t> idx(d, 0);
  std::vector<double> xi(d);
  for (int a = 0; a < d; ++a) xi[a] = grid.axis_frequencies(a)[0];
  const std::size_t n = grid.total();
  for (std::size_t flat = 0; flat < n; ++flat) {
    fn(flat, std::span<const double>(xi));
    for (int a = d - 1; a >= 0; --a) {
      if (++idx[a] < grid.size(a)) {
        xi[a] = grid.axis_frequencies(a)[idx[a]];
        break;
      }
      idx[a] = 0;
      xi[a] = grid.axis_frequencies(a)[0];
    }
  }
}

/// Same traversal over centered physical coordinates.
template <class Fn>
void for_each_point(const Grid& grid, Fn&& fn) {
  const int d = grid.dim();
  std::vector<std::size_t> idx(d, 0);
  std::vector<double> x(d);
  for (int a = 0; a < d; ++a) x[a] = grid.coordinate(a, 0);
  const std::size_t n = grid.total();
  for (std::size_t flat = 0; flat < n; ++flat) {
    fn(flat, std::span<const double>(x));
    for (int a = d - 1; a >= 0; --a) {
      if (++idx[a] < grid.size(a)) {
        x[a] = grid.coordinate(a, idx[a]);
        break;
      }
      idx[a] = 0;
      x[a] = grid.coordinate(a, 0);
    }
  }
}

}  // namespace bep
