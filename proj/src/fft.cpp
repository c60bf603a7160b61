#include "specdiff/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace specdiff {

namespace {

// FFTW plan creation is not thread-safe; execution of a plan on its own
// buffers is. We plan per call under a lock (ESTIMATE plans are cheap and
// deterministic), then execute outside it.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::vector<cplx> transform(const std::vector<cplx>& in, int sign) {
  if (in.empty()) return {};
  const std::size_t n = in.size();
  fftw_complex* buf =
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  if (buf == nullptr) throw std::bad_alloc();
  for (std::size_t i = 0; i < n; ++i) {
    buf[i][0] = in[i].real();
    buf[i][1] = in[i].imag();
  }
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, sign,
                            FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::vector<cplx> out(n);
  const double scale = (sign == FFTW_BACKWARD) ? 1.0 / static_cast<double>(n)
                                               : 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = cplx{buf[i][0] * scale, buf[i][1] * scale};
  }
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(buf);
  return out;
}

}  // namespace

std::vector<cplx> fft_forward(const std::vector<cplx>& in) {
  return transform(in, FFTW_FORWARD);
}

std::vector<cplx> fft_inverse(const std::vector<cplx>& in) {
  return transform(in, FFTW_BACKWARD);
}

std::size_t fft_pad_size(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace specdiff
