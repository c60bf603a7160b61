#include "specdiff/factors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "specdiff/rng.hpp"

namespace specdiff {

FactorPoint factor_point(const SystemSpec& spec, const Observable& f,
                         const State& x, std::int64_t half_width) {
  if (half_width < 0) throw std::invalid_argument("half width must be >= 0");
  FactorPoint p;
  p.half_width = half_width;
  p.window.resize(static_cast<std::size_t>(2 * half_width + 1));
  for (std::int64_t t = -half_width; t <= half_width; ++t) {
    p.window[static_cast<std::size_t>(t + half_width)] =
        f.eval(apply_action(spec, x, -t));
  }
  p.center = x.describe(spec);
  return p;
}

PosDefSequence factor_autocorrelation(const SystemSpec& spec,
                                      const Observable& f,
                                      const EstimatorParams& params) {
  const std::int64_t extent =
      std::max(std::llabs(f.coord_min()), std::llabs(f.coord_max()));
  if (spec.is_finite_cyclic()) {
    const auto& fc = std::get<FiniteCyclicSpec>(spec.variant());
    const State x =
        sample_invariant(spec, derive_seed(params.seed, "factor-state"), 0);
    SampledSignal sig;
    sig.values.resize(static_cast<std::size_t>(fc.size));
    for (std::int64_t t = 0; t < fc.size; ++t) {
      sig.values[static_cast<std::size_t>(t)] =
          f.eval(apply_action(spec, x, -t));
    }
    sig.origin = "factor:" + x.describe(spec);
    return periodic_autocorrelation(sig, params.max_lag);
  }
  const State x =
      sample_invariant(spec, derive_seed(params.seed, "factor-state"),
                       params.orbit_length + extent + 1);
  SampledSignal sig;
  sig.values.resize(static_cast<std::size_t>(params.orbit_length));
  for (std::int64_t t = 0; t < params.orbit_length; ++t) {
    sig.values[static_cast<std::size_t>(t)] =
        f.eval(apply_action(spec, x, -t));
  }
  sig.origin = "factor:" + x.describe(spec);
  return empirical_autocorrelation(sig, params.max_lag);
}

double factor_transfer_residual(const SystemSpec& spec,
                                const Observable& f, const TestFunction& phi,
                                const EstimatorParams& params) {
  if (phi.is_zero()) return 0.0;
  const std::int64_t span =
      std::max(std::llabs(phi.support_min()), std::llabs(phi.support_max()));
  const std::int64_t k = params.max_lag;
  if (2 * span > k) {
    throw std::invalid_argument(
        "transfer residual: phi support must fit within max_lag/2");
  }
  const TestFunction g = convolve(phi, involute(phi));

  // left side: coefficients of |phi^|^2 gamma^, i.e.
  //   sum_m (phi * phi~)(m) gamma(n + m)
  // needs gamma out to K + 2*span
  const std::int64_t gamma_lag = k + 2 * span;
  std::vector<cplx> lhs(static_cast<std::size_t>(2 * k + 1));
  std::vector<cplx> rhs(static_cast<std::size_t>(2 * k + 1));

  if (spec.is_finite_cyclic()) {
    const auto& fc = std::get<FiniteCyclicSpec>(spec.variant());
    const PosDefSequence gamma = exact_coefficients_finite(spec, f, gamma_lag);
    for (std::int64_t n = -k; n <= k; ++n) {
      cplx acc{0.0, 0.0};
      for (std::int64_t m = g.support_min(); m <= g.support_max(); ++m) {
        acc += g.at(m) * gamma.at(n + m);
      }
      lhs[static_cast<std::size_t>(n + k)] = acc;
    }
    // right side, exact: h = N^f(phi) evaluated on every state
    std::vector<cplx> h(static_cast<std::size_t>(fc.size));
    for (std::int64_t j = 0; j < fc.size; ++j) {
      State st;
      st.value = j;
      h[static_cast<std::size_t>(j)] = nmap_apply(phi, f, spec, st);
    }
    auto mod = [&fc](std::int64_t a) {
      std::int64_t r = a % fc.size;
      return r < 0 ? r + fc.size : r;
    };
    for (std::int64_t n = -k; n <= k; ++n) {
      cplx acc{0.0, 0.0};
      for (std::int64_t j = 0; j < fc.size; ++j) {
        acc += fc.weights[static_cast<std::size_t>(j)] *
               h[static_cast<std::size_t>(mod(j - n * fc.step))] *
               std::conj(h[static_cast<std::size_t>(j)]);
      }
      rhs[static_cast<std::size_t>(n + k)] = acc;
    }
  } else {
    EstimatorParams gp = params;
    gp.max_lag = gamma_lag;
    gp.orbit_length = std::max(params.orbit_length, 10 * gamma_lag);
    gp.seed = derive_seed(params.seed, "transfer-gamma");
    const PosDefSequence gamma = spectral_coefficients_mc(spec, f, gp);
    for (std::int64_t n = -k; n <= k; ++n) {
      cplx acc{0.0, 0.0};
      for (std::int64_t m = g.support_min(); m <= g.support_max(); ++m) {
        acc += g.at(m) * gamma.at(n + m);
      }
      lhs[static_cast<std::size_t>(n + k)] = acc;
    }
    // right side: Monte Carlo of <U^n g, g> for g = N^f(phi), evaluated
    // through per-sample windows of f
    const std::int64_t extent =
        std::max(std::llabs(f.coord_min()), std::llabs(f.coord_max()));
    const std::int64_t half = k + span;
    const std::size_t width = static_cast<std::size_t>(2 * k + 1);
    std::vector<cplx> acc(width, cplx{0.0, 0.0});
    const std::uint64_t rhs_seed = derive_seed(params.seed, "transfer-rhs");
    for (std::int64_t i = 0; i < params.mc_samples; ++i) {
      const State x = sample_invariant(
          spec, derive_seed(rhs_seed, "sample", static_cast<std::uint64_t>(i)),
          half + extent + 1);
      const std::vector<cplx> w = two_sided_samples(spec, f, x, half);
      auto g_at = [&](std::int64_t n) {
        cplx s{0.0, 0.0};
        for (std::int64_t t = phi.support_min(); t <= phi.support_max(); ++t) {
          s += phi.at(t) * w[static_cast<std::size_t>(n + t + half)];
        }
        return s;
      };
      const cplx g0 = std::conj(g_at(0));
      for (std::int64_t n = -k; n <= k; ++n) {
        acc[static_cast<std::size_t>(n + k)] += g_at(n) * g0;
      }
    }
    const double m = static_cast<double>(params.mc_samples);
    for (std::size_t j = 0; j < width; ++j) rhs[j] = acc[j] / m;
    // Hermitian symmetrization, matching the spectral estimator
    const std::size_t k0 = static_cast<std::size_t>(k);
    for (std::size_t n = 0; n <= k0; ++n) {
      const cplx avg = 0.5 * (rhs[k0 + n] + std::conj(rhs[k0 - n]));
      rhs[k0 + n] = avg;
      rhs[k0 - n] = std::conj(avg);
    }
  }

  double sup = 0.0;
  for (std::size_t j = 0; j < lhs.size(); ++j) {
    sup = std::max(sup, std::abs(lhs[j] - rhs[j]));
  }
  return sup;
}

bool correspondence_check(const SystemSpec& spec, const Observable& f,
                          std::int64_t samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  const std::int64_t extent =
      std::max(std::llabs(f.coord_min()), std::llabs(f.coord_max()));
  for (std::int64_t i = 0; i < samples; ++i) {
    const State x = sample_invariant(
        spec, derive_seed(seed, "correspondence", static_cast<std::uint64_t>(i)),
        extent + 1);
    const FactorPoint p = factor_point(spec, f, x, 0);
    if (p.at(0) != f.eval(x)) return false;
  }
  return true;
}

}  // namespace specdiff
