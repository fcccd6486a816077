#pragma once

#include <fftw3.h>

#include <cstddef>
#include <memory>
#include <vector>

#include "bep/field.hpp"

namespace bep::detail {

/// In-place c2c plans for one lattice shape. Execution goes through the
/// new-array interface, which FFTW documents as thread-safe.
struct FftPlans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  FftPlans() = default;
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;
  ~FftPlans();
};

std::shared_ptr<const FftPlans> plans_for(const std::vector<std::size_t>& sizes);

/// Unnormalized in-place transforms (forward uses exp(-i k x)).
void execute_forward(const Grid& grid, cplx* data);
void execute_backward(const Grid& grid, cplx* data);

/// Physical samples of up to two real fields to normalized coefficients with a
/// single complex transform. Either second pointer may be null.
void real_pair_to_spectral(const Grid& grid, const double* a, const double* b, cplx* out_a,
                           cplx* out_b, ComplexBuffer& work);

/// Coefficients of up to two real fields to physical samples with one
/// complex transform. `b`/`out_b` may be null.
void spectral_pair_to_real(const Grid& grid, const cplx* a, const cplx* b, double* out_a,
                           double* out_b, ComplexBuffer& work);

}  // namespace bep::detail
