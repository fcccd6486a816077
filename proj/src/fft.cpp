#include "detail/fft.hpp"

#include <map>
#include <mutex>
#include <new>

namespace bep {

template <class T>
T* FftwAllocator<T>::allocate(std::size_t n) {
  if (n == 0) return nullptr;
  void* p = fftw_malloc(n * sizeof(T));
  if (p == nullptr) throw std::bad_alloc();
  return static_cast<T*>(p);
}

template <class T>
void FftwAllocator<T>::deallocate(T* p, std::size_t) noexcept {
  fftw_free(p);
}

template struct FftwAllocator<cplx>;
template struct FftwAllocator<double>;

namespace detail {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

FftPlans::~FftPlans() {
  std::lock_guard lock(planner_mutex());
  if (forward != nullptr) fftw_destroy_plan(forward);
  if (backward != nullptr) fftw_destroy_plan(backward);
}

std::shared_ptr<const FftPlans> plans_for(const std::vector<std::size_t>& sizes) {
  static std::map<std::vector<std::size_t>, std::weak_ptr<const FftPlans>> cache;
  std::lock_guard lock(planner_mutex());
  if (auto it = cache.find(sizes); it != cache.end()) {
    if (auto live = it->second.lock()) return live;
  }
  std::vector<int> n(sizes.begin(), sizes.end());
  std::size_t total = 1;
  for (auto s : sizes) total *= s;
  auto* scratch = fftw_alloc_complex(total);
  if (scratch == nullptr) throw std::bad_alloc();
  auto plans = std::make_shared<FftPlans>();
  plans->forward = fftw_plan_dft(static_cast<int>(n.size()), n.data(), scratch, scratch,
                                 FFTW_FORWARD, FFTW_ESTIMATE);
  plans->backward = fftw_plan_dft(static_cast<int>(n.size()), n.data(), scratch, scratch,
                                  FFTW_BACKWARD, FFTW_ESTIMATE);
  fftw_free(scratch);
  cache[sizes] = plans;
  return plans;
}

void execute_forward(const Grid& grid, cplx* data) {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(grid.plans().forward, p, p);
}

void execute_backward(const Grid& grid, cplx* data) {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(grid.plans().backward, p, p);
}

namespace {

/// Calls fn(flat, mirror_flat) over the lattice, where mirror_flat indexes -k.
template <class Fn>
void for_each_mirror(const Grid& grid, Fn&& fn) {
  const int d = grid.dim();
  std::vector<std::size_t> idx(d, 0);
  std::size_t mflat = 0;
  const std::size_t n = grid.total();
  for (std::size_t flat = 0; flat < n; ++flat) {
    fn(flat, mflat);
    for (int a = d - 1; a >= 0; --a) {
      const auto& mir = grid.axis_mirror(a);
      const std::size_t st = grid.stride(a);
      mflat -= mir[idx[a]] * st;
      if (++idx[a] < grid.size(a)) {
        mflat += mir[idx[a]] * st;
        break;
      }
      idx[a] = 0;
      mflat += mir[0] * st;
    }
  }
}

}  // namespace

void real_pair_to_spectral(const Grid& grid, const double* a, const double* b, cplx* out_a,
                           cplx* out_b, ComplexBuffer& work) {
  const std::size_t n = grid.total();
  work.resize(n);
  if (b == nullptr) {
    for (std::size_t i = 0; i < n; ++i) work[i] = cplx(a[i], 0.0);
  } else {
    for (std::size_t i = 0; i < n; ++i) work[i] = cplx(a[i], b[i]);
  }
  execute_forward(grid, work.data());
  const double inv = 1.0 / static_cast<double>(n);
  if (b == nullptr) {
    // Symmetrize so the result is exactly Hermitian.
    for_each_mirror(grid, [&](std::size_t k, std::size_t m) {
      out_a[k] = 0.5 * inv * (work[k] + std::conj(work[m]));
    });
    return;
  }
  for_each_mirror(grid, [&](std::size_t k, std::size_t m) {
    const cplx z = work[k];
    const cplx zm = std::conj(work[m]);
    out_a[k] = 0.5 * inv * (z + zm);
    const cplx diff = z - zm;
    // (z - conj(z_m)) / (2i)
    out_b[k] = 0.5 * inv * cplx(diff.imag(), -diff.real());
  });
}

void spectral_pair_to_real(const Grid& grid, const cplx* a, const cplx* b, double* out_a,
                           double* out_b, ComplexBuffer& work) {
  const std::size_t n = grid.total();
  work.resize(n);
  if (b == nullptr) {
    for (std::size_t i = 0; i < n; ++i) work[i] = a[i];
  } else {
    for (std::size_t i = 0; i < n; ++i) work[i] = a[i] + cplx(-b[i].imag(), b[i].real());
  }
  execute_backward(grid, work.data());
  for (std::size_t i = 0; i < n; ++i) out_a[i] = work[i].real();
  if (b != nullptr && out_b != nullptr) {
    for (std::size_t i = 0; i < n; ++i) out_b[i] = work[i].imag();
  }
}

}  // namespace detail
}  // namespace bep
