#include "bep/field.hpp"

#include <algorithm>
#include <cmath>

#include "bep/errors.hpp"

namespace bep {

void require_same_grid(const Grid& a, const Grid& b, const char* where) {
  if (!same_grid(a, b)) throw GridMismatch(std::string(where) + ": fields live on different grids");
}

SpectralField::SpectralField(GridPtr grid) : grid_(std::move(grid)), coeffs_(grid_->total()) {}

SpectralField::SpectralField(GridPtr grid, ComplexBuffer coeffs)
    : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_->total()) {
    throw std::invalid_argument("SpectralField: coefficient count does not match grid");
  }
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_grid(*grid_, other.grid(), "SpectralField::operator+=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_grid(*grid_, other.grid(), "SpectralField::operator-=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double scale) {
  for (auto& c : coeffs_) c *= scale;
  return *this;
}

SpectralField& SpectralField::axpy(double scale, const SpectralField& other) {
  require_same_grid(*grid_, other.grid(), "SpectralField::axpy");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += scale * other.coeffs_[i];
  return *this;
}

double SpectralField::max_abs() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

double SpectralField::coefficient_norm() const {
  double s = 0.0;
  for (const auto& c : coeffs_) s += std::norm(c);
  return std::sqrt(s);
}

bool SpectralField::all_finite() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](const cplx& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

VectorField::VectorField(GridPtr grid, int components) {
  if (components < 1) throw std::invalid_argument("VectorField: need at least one component");
  comps_.reserve(components);
  for (int i = 0; i < components; ++i) comps_.emplace_back(grid);
}

VectorField::VectorField(std::vector<SpectralField> components) : comps_(std::move(components)) {
  if (comps_.empty()) throw std::invalid_argument("VectorField: need at least one component");
  for (const auto& c : comps_) require_same_grid(comps_.front().grid(), c.grid(), "VectorField");
}

VectorField& VectorField::operator+=(const VectorField& other) {
  if (other.components() != components()) throw std::invalid_argument("VectorField: component count mismatch");
  for (int i = 0; i < components(); ++i) comps_[i] += other[i];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& other) {
  if (other.components() != components()) throw std::invalid_argument("VectorField: component count mismatch");
  for (int i = 0; i < components(); ++i) comps_[i] -= other[i];
  return *this;
}

VectorField& VectorField::operator*=(double scale) {
  for (auto& c : comps_) c *= scale;
  return *this;
}

VectorField& VectorField::axpy(double scale, const VectorField& other) {
  if (other.components() != components()) throw std::invalid_argument("VectorField: component count mismatch");
  for (int i = 0; i < components(); ++i) comps_[i].axpy(scale, other[i]);
  return *this;
}

double VectorField::max_abs() const {
  double m = 0.0;
  for (const auto& c : comps_) m = std::max(m, c.max_abs());
  return m;
}

double VectorField::coefficient_norm() const {
  double s = 0.0;
  for (const auto& c : comps_) {
    const double n = c.coefficient_norm();
    s += n * n;
  }
  return std::sqrt(s);
}

bool VectorField::all_finite() const {
  return std::all_of(comps_.begin(), comps_.end(), [](const SpectralField& c) { return c.all_finite(); });
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double s, VectorField a) { return a *= s; }

}  // namespace bep
