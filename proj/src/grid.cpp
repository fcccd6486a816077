#include "bep/grid.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "detail/fft.hpp"

namespace bep {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

Grid::Grid(std::vector<double> lengths, std::vector<std::size_t> sizes)
    : lengths_(std::move(lengths)), sizes_(std::move(sizes)) {
  const int d = dim();
  strides_.assign(d, 1);
  for (int a = d - 2; a >= 0; --a) strides_[a] = strides_[a + 1] * sizes_[a + 1];
  total_ = 1;
  for (auto s : sizes_) total_ *= s;
  freqs_.resize(d);
  mirror_.resize(d);
  for (int a = 0; a < d; ++a) {
    const std::size_t n = sizes_[a];
    freqs_[a].resize(n);
    mirror_[a].resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      freqs_[a][i] = frequency(a, i);
      mirror_[a][i] = (n - i) % n;
    }
  }
  plans_ = detail::plans_for(sizes_);
}

double Grid::spacing(int axis) const { return lengths_.at(axis) / static_cast<double>(sizes_.at(axis)); }

double Grid::min_spacing() const {
  double m = spacing(0);
  for (int a = 1; a < dim(); ++a) m = std::min(m, spacing(a));
  return m;
}

double Grid::frequency_step(int axis) const { return 2.0 * std::numbers::pi / lengths_.at(axis); }

double Grid::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim(); ++a) v *= spacing(a);
  return v;
}

double Grid::volume() const {
  double v = 1.0;
  for (double l : lengths_) v *= l;
  return v;
}

std::int64_t Grid::wavenumber(int axis, std::size_t i) const {
  const auto n = static_cast<std::int64_t>(sizes_.at(axis));
  const auto k = static_cast<std::int64_t>(i);
  return k < n / 2 ? k : k - n;
}

double Grid::frequency(int axis, std::size_t i) const {
  return static_cast<double>(wavenumber(axis, i)) * frequency_step(axis);
}

double Grid::coordinate(int axis, std::size_t i) const {
  return static_cast<double>(wavenumber(axis, i)) * spacing(axis);
}

std::int64_t Grid::dealias_cutoff(int axis) const {
  return static_cast<std::int64_t>(sizes_.at(axis) / 3);
}

double Grid::dealias_frequency(int axis) const {
  return static_cast<double>(dealias_cutoff(axis)) * frequency_step(axis);
}

std::size_t Grid::mirror_flat(std::size_t flat) const {
  std::size_t out = 0;
  for (int a = 0; a < dim(); ++a) {
    const std::size_t i = (flat / strides_[a]) % sizes_[a];
    out += mirror_[a][i] * strides_[a];
  }
  return out;
}

std::string Grid::key() const {
  std::ostringstream os;
  os << "grid:d=" << dim();
  for (int a = 0; a < dim(); ++a) os << ";N" << a << '=' << sizes_[a] << ";L" << a << '=' << std::hexfloat << lengths_[a] << std::defaultfloat;
  return os.str();
}

GridPtr make_grid(int dim, std::vector<double> lengths, std::vector<std::size_t> sizes) {
  if (dim < 1) throw std::invalid_argument("make_grid: dim must be >= 1");
  if (static_cast<int>(lengths.size()) != dim || static_cast<int>(sizes.size()) != dim) {
    throw std::invalid_argument("make_grid: expected one length and one size per axis");
  }
  for (int a = 0; a < dim; ++a) {
    if (!is_power_of_two(sizes[a]) || sizes[a] < 4) {
      throw std::invalid_argument("make_grid: size " + std::to_string(sizes[a]) + " on axis " +
                                  std::to_string(a) + " is not a power of two >= 4");
    }
    if (!(lengths[a] > 0.0) || !std::isfinite(lengths[a])) {
      throw std::invalid_argument("make_grid: length on axis " + std::to_string(a) +
                                  " must be positive and finite");
    }
  }
  return std::make_shared<const Grid>(std::move(lengths), std::move(sizes));
}

bool same_grid(const Grid& a, const Grid& b) noexcept { return &a == &b || a == b; }

}  // namespace bep
