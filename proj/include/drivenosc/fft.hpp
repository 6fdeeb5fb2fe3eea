// Thin FFTW wrapper: in-place unnormalized complex transforms with a
// process-lifetime plan cache. Plan creation is serialized (the FFTW planner
// is not thread safe); fftw_execute_dft on distinct arrays is.
#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <vector>

#include <fftw3.h>

namespace drivenosc {
namespace detail {

struct FftPlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

inline const FftPlanPair& fft_plans(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, FftPlanPair> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) {
    std::vector<std::complex<double>> buffer(n);
    auto* raw = reinterpret_cast<fftw_complex*>(buffer.data());
    // FFTW_UNALIGNED so the plans can run on any caller array via
    // fftw_execute_dft; FFTW_ESTIMATE keeps planning deterministic.
    FftPlanPair plans;
    plans.forward = fftw_plan_dft_1d(static_cast<int>(n), raw, raw, FFTW_FORWARD,
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans.backward = fftw_plan_dft_1d(static_cast<int>(n), raw, raw, FFTW_BACKWARD,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    it = cache.emplace(n, plans).first;
  }
  return it->second;
}

}  // namespace detail

inline void fft_forward(std::vector<std::complex<double>>& a) {
  auto* raw = reinterpret_cast<fftw_complex*>(a.data());
  fftw_execute_dft(detail::fft_plans(a.size()).forward, raw, raw);
}

// Unnormalized inverse; fft_inverse(fft_forward(a)) scales a by a.size().
inline void fft_inverse(std::vector<std::complex<double>>& a) {
  auto* raw = reinterpret_cast<fftw_complex*>(a.data());
  fftw_execute_dft(detail::fft_plans(a.size()).backward, raw, raw);
}

}  // namespace drivenosc
