#pragma once

#include <cmath>
#include <numbers>

#include "bep/field.hpp"

namespace bep::test {

inline constexpr double kPi = std::numbers::pi;

/// Max coefficient distance relative to the larger field's max coefficient.
inline double rel_diff(const SpectralField& a, const SpectralField& b) {
  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff = std::max(diff, std::abs(a[i] - b[i]));
    scale = std::max({scale, std::abs(a[i]), std::abs(b[i])});
  }
  return scale > 0.0 ? diff / scale : diff;
}

inline double rel_diff(const VectorField& a, const VectorField& b) {
  double diff = 0.0, scale = 0.0;
  for (int c = 0; c < a.components(); ++c) {
    for (std::size_t i = 0; i < a[c].size(); ++i) {
      diff = std::max(diff, std::abs(a[c][i] - b[c][i]));
      scale = std::max({scale, std::abs(a[c][i]), std::abs(b[c][i])});
    }
  }
  return scale > 0.0 ? diff / scale : diff;
}

}  // namespace bep::test
