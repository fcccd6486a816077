#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "bep/grid.hpp"

namespace bep {

using cplx = std::complex<double>;

template <class T>
struct FftwAllocator {
  using value_type = T;
  FftwAllocator() = default;
  template <class U>
  FftwAllocator(const FftwAllocator<U>&) noexcept {}
  T* allocate(std::size_t n);
  void deallocate(T* p, std::size_t) noexcept;
  template <class U>
  bool operator==(const FftwAllocator<U>&) const noexcept { return true; }
};

/// SIMD-aligned coefficient storage shared with the FFT plans.
using ComplexBuffer = std::vector<cplx, FftwAllocator<cplx>>;
/// Physical-space samples in grid storage order.
using RealBuffer = std::vector<double, FftwAllocator<double>>;

/// Fourier coefficients of one real scalar field: u(x) = sum_k c_k exp(i xi_k . x).
class SpectralField {
 public:
  explicit SpectralField(GridPtr grid);
  SpectralField(GridPtr grid, ComplexBuffer coeffs);

  const Grid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }

  std::span<const cplx> coeffs() const noexcept { return coeffs_; }
  std::span<cplx> coeffs() noexcept { return coeffs_; }
  std::size_t size() const noexcept { return coeffs_.size(); }
  cplx operator[](std::size_t flat) const { return coeffs_[flat]; }
  cplx& operator[](std::size_t flat) { return coeffs_[flat]; }

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double scale);
  /// this += scale * other
  SpectralField& axpy(double scale, const SpectralField& other);

  /// Largest coefficient modulus.
  double max_abs() const;
  /// sqrt(sum |c_k|^2); the L2 norm divided by sqrt(volume).
  double coefficient_norm() const;
  bool all_finite() const;

 private:
  GridPtr grid_;
  ComplexBuffer coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

/// d scalar components on one grid.
class VectorField {
 public:
  /// Zero field with `components` components.
  VectorField(GridPtr grid, int components);
  explicit VectorField(std::vector<SpectralField> components);

  int components() const noexcept { return static_cast<int>(comps_.size()); }
  const Grid& grid() const noexcept { return comps_.front().grid(); }
  const GridPtr& grid_ptr() const noexcept { return comps_.front().grid_ptr(); }

  const SpectralField& operator[](int i) const { return comps_.at(i); }
  SpectralField& operator[](int i) { return comps_.at(i); }

  auto begin() const { return comps_.begin(); }
  auto end() const { return comps_.end(); }

  VectorField& operator+=(const VectorField& other);
  VectorField& operator-=(const VectorField& other);
  VectorField& operator*=(double scale);
  VectorField& axpy(double scale, const VectorField& other);

  double max_abs() const;
  double coefficient_norm() const;
  bool all_finite() const;

 private:
  std::vector<SpectralField> comps_;
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double s, VectorField a);

/// Throws GridMismatch unless both grids are equal.
void require_same_grid(const Grid& a, const Grid& b, const char* where);

}  // namespace bep
