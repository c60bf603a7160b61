#pragma once

#include <cstdint>

#include "specdiff/pos_def_sequence.hpp"
#include "specdiff/systems.hpp"

namespace specdiff {

struct EstimatorParams {
  std::int64_t max_lag = 50;
  std::int64_t orbit_length = 100000;
  std::int64_t mc_samples = 100000;
  std::uint64_t seed = 0;
  double tol_exact = 1e-9;
  double tol_stat = 5e-2;

  void validate() const;  // max_lag <= orbit_length/10, mc_samples >= 100
};

// Diffraction side: windowed self-correlation of one orbit,
//   c_k = (1/N) sum_{n=0}^{N-1-k} s[n+k] conj(s[n]),
// computed by FFT in O(N log N). The 1/N normalization makes the estimate a
// normalized self-convolution, hence positive definite by construction.
// Rejects K > N/10.
PosDefSequence empirical_autocorrelation(const SampledSignal& signal,
                                         std::int64_t max_lag);

// Circular variant for signals that are exactly one period of a periodic
// orbit: c_k = (1/P) sum_n s[(n+k) mod P] conj(s[n]). Exact for finite
// systems sampled over a full period.
PosDefSequence periodic_autocorrelation(const SampledSignal& signal,
                                        std::int64_t max_lag);

// Spectral side: Monte Carlo of c_n = int f(alpha_{-n} x) conj(f(x)) dm(x)
// over invariant-measure samples, Hermitian-symmetrized, with per-lag
// standard errors.
PosDefSequence spectral_coefficients_mc(const SystemSpec& spec,
                                        const Observable& f,
                                        const EstimatorParams& params);

// Exact finite-system oracle: c_n = sum_x m(x) f(x - n step) conj(f(x)).
// Finite cyclic systems only.
PosDefSequence exact_coefficients_finite(const SystemSpec& spec,
                                         const Observable& f,
                                         std::int64_t max_lag);

// (N^f phi)(x) = sum_n phi(n) f(alpha_{-n} x)
cplx nmap_apply(const TestFunction& phi, const Observable& f,
                const SystemSpec& spec, const State& x);

// | sum_n c(n) (phi * psi~)(n)  -  <N^f phi, N^f psi> |, the defining
// identity of the autocorrelation. The inner product is exact on finite
// cyclic systems and Monte Carlo elsewhere.
double nmap_identity_residual(const PosDefSequence& c,
                              const TestFunction& phi, const TestFunction& psi,
                              const SystemSpec& spec, const Observable& f,
                              const EstimatorParams& params);

}  // namespace specdiff
