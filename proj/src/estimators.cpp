#include "specdiff/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "specdiff/fft.hpp"
#include "specdiff/rng.hpp"

namespace specdiff {

void EstimatorParams::validate() const {
  if (max_lag < 0) throw std::invalid_argument("max_lag must be >= 0");
  if (orbit_length < 1) throw std::invalid_argument("orbit_length must be >= 1");
  if (max_lag > orbit_length / 10) {
    throw std::invalid_argument(
        "resolution guard: max_lag must not exceed orbit_length/10");
  }
  if (mc_samples < 100) {
    throw std::invalid_argument("mc_samples must be >= 100");
  }
}

PosDefSequence empirical_autocorrelation(const SampledSignal& signal,
                                         std::int64_t max_lag) {
  const std::int64_t n = static_cast<std::int64_t>(signal.values.size());
  if (n < 1) throw std::invalid_argument("empty signal");
  if (max_lag > n / 10) {
    throw std::invalid_argument(
        "resolution guard: max_lag must not exceed signal length / 10");
  }
  const std::size_t padded =
      fft_pad_size(static_cast<std::size_t>(n + max_lag + 1));
  std::vector<cplx> buf(padded, cplx{0.0, 0.0});
  std::copy(signal.values.begin(), signal.values.end(), buf.begin());
  std::vector<cplx> spec = fft_forward(buf);
  for (auto& v : spec) v = cplx{std::norm(v), 0.0};
  std::vector<cplx> corr = fft_inverse(spec);

  std::vector<cplx> lags(static_cast<std::size_t>(max_lag) + 1);
  for (std::int64_t k = 0; k <= max_lag; ++k) {
    lags[static_cast<std::size_t>(k)] =
        corr[static_cast<std::size_t>(k)] / static_cast<double>(n);
  }
  // the zero lag of a self-correlation is exactly real
  lags[0] = cplx{lags[0].real(), 0.0};
  return PosDefSequence::from_nonnegative_lags(
      std::move(lags), 1e-6, "orbit:" + signal.origin);
}

PosDefSequence periodic_autocorrelation(const SampledSignal& signal,
                                        std::int64_t max_lag) {
  const std::int64_t p = static_cast<std::int64_t>(signal.values.size());
  if (p < 1) throw std::invalid_argument("empty signal");
  if (max_lag < 0) throw std::invalid_argument("max_lag must be >= 0");
  std::vector<cplx> lags(static_cast<std::size_t>(max_lag) + 1);
  for (std::int64_t k = 0; k <= max_lag; ++k) {
    cplx acc{0.0, 0.0};
    for (std::int64_t n = 0; n < p; ++n) {
      acc += signal.values[static_cast<std::size_t>((n + k) % p)] *
             std::conj(signal.values[static_cast<std::size_t>(n)]);
    }
    lags[static_cast<std::size_t>(k)] = acc / static_cast<double>(p);
  }
  lags[0] = cplx{lags[0].real(), 0.0};
  return PosDefSequence::from_nonnegative_lags(
      std::move(lags), 1e-9, "periodic-orbit:" + signal.origin);
}

PosDefSequence spectral_coefficients_mc(const SystemSpec& spec,
                                        const Observable& f,
                                        const EstimatorParams& params) {
  if (params.mc_samples < 100) {
    throw std::invalid_argument("mc_samples must be >= 100");
  }
  const std::int64_t k = params.max_lag;
  const std::int64_t extent =
      std::max(std::llabs(f.coord_min()), std::llabs(f.coord_max()));
  const std::int64_t horizon = k + extent;
  const std::size_t width = static_cast<std::size_t>(2 * k + 1);

  std::vector<cplx> acc(width, cplx{0.0, 0.0});
  std::vector<double> acc2(width, 0.0);
  const double m = static_cast<double>(params.mc_samples);
  for (std::int64_t i = 0; i < params.mc_samples; ++i) {
    const State x = sample_invariant(
        spec, derive_seed(params.seed, "mc-sample", static_cast<std::uint64_t>(i)),
        horizon);
    const std::vector<cplx> w = two_sided_samples(spec, f, x, k);
    const cplx f0 = std::conj(w[static_cast<std::size_t>(k)]);
    for (std::size_t j = 0; j < width; ++j) {
      const cplx z = w[j] * f0;
      acc[j] += z;
      acc2[j] += std::norm(z);
    }
  }
  std::vector<cplx> full(width);
  std::vector<double> se(width);
  for (std::size_t j = 0; j < width; ++j) {
    full[j] = acc[j] / m;
    const double var = std::max(0.0, acc2[j] / m - std::norm(full[j]));
    se[j] = std::sqrt(var / m);
  }
  // Hermitian symmetrization: average c_n with conj(c_{-n})
  const std::size_t k0 = static_cast<std::size_t>(k);
  for (std::size_t n = 0; n <= k0; ++n) {
    const cplx avg = 0.5 * (full[k0 + n] + std::conj(full[k0 - n]));
    full[k0 + n] = avg;
    full[k0 - n] = std::conj(avg);
    const double s = 0.5 * (se[k0 + n] + se[k0 - n]);
    se[k0 + n] = s;
    se[k0 - n] = s;
  }
  full[k0] = cplx{full[k0].real(), 0.0};
  return PosDefSequence(std::move(full), params.tol_stat,
                        "mc:" + spec.name() + ":" + f.name(), std::move(se));
}

PosDefSequence exact_coefficients_finite(const SystemSpec& spec,
                                         const Observable& f,
                                         std::int64_t max_lag) {
  if (!spec.is_finite_cyclic()) {
    throw std::invalid_argument(
        "exact_coefficients_finite needs a finite cyclic system");
  }
  const auto& c = std::get<FiniteCyclicSpec>(spec.variant());
  const std::int64_t size = c.size;
  std::vector<cplx> fx(static_cast<std::size_t>(size));
  for (std::int64_t j = 0; j < size; ++j) {
    State st;
    st.value = j;
    fx[static_cast<std::size_t>(j)] = f.eval(st);
  }
  auto mod = [size](std::int64_t a) {
    std::int64_t r = a % size;
    return r < 0 ? r + size : r;
  };
  std::vector<cplx> lags(static_cast<std::size_t>(max_lag) + 1);
  for (std::int64_t n = 0; n <= max_lag; ++n) {
    cplx acc{0.0, 0.0};
    for (std::int64_t j = 0; j < size; ++j) {
      acc += c.weights[static_cast<std::size_t>(j)] *
             fx[static_cast<std::size_t>(mod(j - n * c.step))] *
             std::conj(fx[static_cast<std::size_t>(j)]);
    }
    lags[static_cast<std::size_t>(n)] = acc;
  }
  lags[0] = cplx{lags[0].real(), 0.0};
  return PosDefSequence::from_nonnegative_lags(std::move(lags), 1e-9,
                                               "exact:" + spec.name());
}

cplx nmap_apply(const TestFunction& phi, const Observable& f,
                const SystemSpec& spec, const State& x) {
  cplx acc{0.0, 0.0};
  for (std::int64_t n = phi.support_min(); n <= phi.support_max(); ++n) {
    const cplx coeff = phi.at(n);
    if (coeff == cplx{0.0, 0.0}) continue;
    acc += coeff * f.eval(apply_action(spec, x, -n));
  }
  return acc;
}

double nmap_identity_residual(const PosDefSequence& c,
                              const TestFunction& phi, const TestFunction& psi,
                              const SystemSpec& spec, const Observable& f,
                              const EstimatorParams& params) {
  const TestFunction g = convolve(phi, involute(psi));
  if (!g.is_zero() &&
      (g.support_min() < -c.max_lag() || g.support_max() > c.max_lag())) {
    throw std::invalid_argument(
        "nmap_identity_residual: supp(phi * psi~) exceeds the window");
  }
  cplx lhs{0.0, 0.0};
  for (std::int64_t n = g.support_min(); n <= g.support_max() && !g.is_zero();
       ++n) {
    lhs += c.at(n) * g.at(n);
  }

  cplx rhs{0.0, 0.0};
  if (spec.is_finite_cyclic()) {
    const auto& fc = std::get<FiniteCyclicSpec>(spec.variant());
    for (std::int64_t j = 0; j < fc.size; ++j) {
      State st;
      st.value = j;
      rhs += fc.weights[static_cast<std::size_t>(j)] *
             nmap_apply(phi, f, spec, st) *
             std::conj(nmap_apply(psi, f, spec, st));
    }
  } else {
    const std::int64_t extent =
        std::max(std::llabs(f.coord_min()), std::llabs(f.coord_max()));
    const std::int64_t span =
        std::max({std::llabs(phi.support_min()), std::llabs(phi.support_max()),
                  std::llabs(psi.support_min()),
                  std::llabs(psi.support_max())});
    const std::int64_t horizon = span + extent + 1;
    cplx acc{0.0, 0.0};
    for (std::int64_t i = 0; i < params.mc_samples; ++i) {
      const State x = sample_invariant(
          spec,
          derive_seed(params.seed, "identity-sample",
                      static_cast<std::uint64_t>(i)),
          horizon);
      acc += nmap_apply(phi, f, spec, x) *
             std::conj(nmap_apply(psi, f, spec, x));
    }
    rhs = acc / static_cast<double>(params.mc_samples);
  }
  return std::abs(lhs - rhs);
}

}  // namespace specdiff
