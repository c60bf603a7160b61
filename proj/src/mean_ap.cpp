#include "specdiff/mean_ap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "specdiff/rng.hpp"

namespace specdiff {

void MeanApParams::validate() const {
  if (horizon < 1 || t_max < 1) {
    throw std::invalid_argument("mean_ap: horizon and t_max must be >= 1");
  }
  if (horizon < 10 * t_max) {
    throw std::invalid_argument(
        "mean_ap: shifts must be small relative to the averaging window "
        "(horizon >= 10 * t_max)");
  }
  if (eps_grid.empty()) {
    throw std::invalid_argument("mean_ap: empty epsilon grid");
  }
  double prev = std::numeric_limits<double>::infinity();
  for (double e : eps_grid) {
    if (e <= 0.0 || e >= prev) {
      throw std::invalid_argument(
          "mean_ap: epsilon grid must be positive and strictly decreasing");
    }
    prev = e;
  }
}

namespace {

double curve_point(const std::vector<cplx>& h, std::int64_t t, bool real_only) {
  const std::int64_t len = static_cast<std::int64_t>(h.size());
  const std::int64_t count = len - t;
  double acc = 0.0;
  if (real_only) {
    for (std::int64_t s = 0; s < count; ++s) {
      acc += std::abs(h[static_cast<std::size_t>(s)].real() -
                      h[static_cast<std::size_t>(s + t)].real());
    }
  } else {
    for (std::int64_t s = 0; s < count; ++s) {
      acc += std::sqrt(std::norm(h[static_cast<std::size_t>(s)] -
                                 h[static_cast<std::size_t>(s + t)]));
    }
  }
  return acc / static_cast<double>(count);
}

bool is_real_signal(const std::vector<cplx>& h) {
  for (const cplx& v : h) {
    if (v.imag() != 0.0) return false;
  }
  return true;
}

}  // namespace

double mean_seminorm_diff(const std::vector<cplx>& h, std::int64_t t,
                          std::int64_t n_half) {
  if (h.size() != static_cast<std::size_t>(2 * n_half + 1)) {
    throw std::invalid_argument("mean_seminorm_diff: window size mismatch");
  }
  const std::int64_t abs_t = std::llabs(t);
  if (abs_t > n_half / 10) {
    throw std::invalid_argument(
        "mean_seminorm_diff: |t| must not exceed horizon/10");
  }
  return curve_point(h, abs_t, is_real_signal(h));
}

std::vector<double> seminorm_curve(const std::vector<cplx>& h,
                                   std::int64_t n_half, std::int64_t t_max) {
  if (h.size() < static_cast<std::size_t>(2 * n_half + 1)) {
    throw std::invalid_argument("seminorm_curve: window too short");
  }
  if (t_max > n_half / 10) {
    throw std::invalid_argument("seminorm_curve: t_max exceeds horizon/10");
  }
  // restrict to the two-sided window [-n_half, n_half] of a possibly longer h
  const std::size_t full_half = (h.size() - 1) / 2;
  const std::size_t lo = full_half - static_cast<std::size_t>(n_half);
  const std::vector<cplx> win(h.begin() + static_cast<std::ptrdiff_t>(lo),
                              h.begin() + static_cast<std::ptrdiff_t>(
                                              lo + 2 * n_half + 1));
  const bool real_only = is_real_signal(win);
  std::vector<double> curve(static_cast<std::size_t>(t_max) + 1);
  for (std::int64_t t = 0; t <= t_max; ++t) {
    curve[static_cast<std::size_t>(t)] = curve_point(win, t, real_only);
  }
  return curve;
}

std::vector<std::int64_t> eps_almost_periods(const std::vector<cplx>& h,
                                             double eps,
                                             const MeanApParams& params) {
  params.validate();
  const std::int64_t n_half = (static_cast<std::int64_t>(h.size()) - 1) / 2;
  const auto curve = seminorm_curve(h, n_half, params.t_max);
  std::vector<std::int64_t> shifts;
  for (std::int64_t t = -params.t_max; t <= params.t_max; ++t) {
    if (curve[static_cast<std::size_t>(std::llabs(t))] < eps) {
      shifts.push_back(t);
    }
  }
  return shifts;
}

std::int64_t relative_denseness_gap(const std::vector<std::int64_t>& shifts,
                                    std::int64_t t_max) {
  if (shifts.empty()) {
    throw std::invalid_argument("relative_denseness_gap: empty shift list");
  }
  if (!std::is_sorted(shifts.begin(), shifts.end())) {
    throw std::invalid_argument("relative_denseness_gap: list not sorted");
  }
  if (!std::binary_search(shifts.begin(), shifts.end(), std::int64_t{0})) {
    throw std::invalid_argument("relative_denseness_gap: list must contain 0");
  }
  const std::int64_t margin = t_max / 10;
  const std::int64_t lo = -t_max + margin;
  const std::int64_t hi = t_max - margin;
  std::vector<std::int64_t> inside;
  for (std::int64_t s : shifts) {
    if (s >= lo && s <= hi) inside.push_back(s);
  }
  const std::int64_t span = hi - lo;
  if (inside.size() < 2) return span;  // a lone shift covers nothing
  std::int64_t gap = 0;
  for (std::size_t i = 1; i < inside.size(); ++i) {
    gap = std::max(gap, inside[i] - inside[i - 1]);
  }
  // circular wrap: clustering near one edge must not look dense
  gap = std::max(gap, (inside.front() - lo) + (hi - inside.back()));
  return gap;
}

std::string verdict_name(Verdict v) {
  return v == Verdict::kConsistentWithDiscrete ? "CONSISTENT_WITH_DISCRETE"
                                               : "NOT_MEAN_AP";
}

ClassifyReport classify_discrete_spectrum(const SystemSpec& spec,
                                          const std::vector<Observable>& obs,
                                          const MeanApParams& params,
                                          std::int64_t trials,
                                          std::uint64_t seed) {
  params.validate();
  if (obs.empty()) {
    throw std::invalid_argument("classify: need at least one observable");
  }
  if (trials < 1) throw std::invalid_argument("classify: trials >= 1");
  if (params.horizon / 2 < 10 * params.t_max) {
    throw std::invalid_argument(
        "classify: the companion horizon/2 run needs horizon >= 20 * t_max");
  }

  ClassifyReport report;
  report.system = spec.name();
  report.trials = trials;
  report.overall = Verdict::kConsistentWithDiscrete;

  for (const Observable& f : obs) {
    ObservableVerdict ov;
    ov.observable = f.name();
    ov.verdict = Verdict::kConsistentWithDiscrete;
    const std::int64_t extent =
        std::max(std::llabs(f.coord_min()), std::llabs(f.coord_max()));
    for (std::int64_t r = 0; r < trials; ++r) {
      const State x = sample_invariant(
          spec,
          derive_seed(seed, "classify:" + f.name(),
                      static_cast<std::uint64_t>(r)),
          params.horizon + extent + 1);
      const std::vector<cplx> h =
          two_sided_samples(spec, f, x, params.horizon);
      const auto curve_full = seminorm_curve(h, params.horizon, params.t_max);
      const auto curve_half =
          seminorm_curve(h, params.horizon / 2, params.t_max);

      for (double eps : params.eps_grid) {
        auto shifts_of = [&params](const std::vector<double>& curve,
                                   double e) {
          std::vector<std::int64_t> s;
          for (std::int64_t t = -params.t_max; t <= params.t_max; ++t) {
            if (curve[static_cast<std::size_t>(std::llabs(t))] < e) {
              s.push_back(t);
            }
          }
          return s;
        };
        const auto sf = shifts_of(curve_full, eps);
        const auto sh = shifts_of(curve_half, eps);

        EpsVerdict ev;
        ev.eps = eps;
        for (std::int64_t t : sf) {
          if (t > 0) {
            ev.smallest_period_full = t;
            break;
          }
        }
        if (params.k_max_override) {
          ev.k_max = *params.k_max_override;
        } else {
          const std::int64_t cap = params.t_max / 4;
          ev.k_max = ev.smallest_period_full > 0
                         ? std::min(4 * ev.smallest_period_full, cap)
                         : cap;
        }
        ev.gap_full = relative_denseness_gap(sf, params.t_max);
        ev.gap_half = relative_denseness_gap(sh, params.t_max);
        ev.dense_full = ev.gap_full <= ev.k_max;
        ev.dense_half = ev.gap_half <= ev.k_max;
        if (ev.dense_full != ev.dense_half) ov.horizons_agree = false;
        if (!(ev.dense_full && ev.dense_half)) {
          if (ov.verdict == Verdict::kConsistentWithDiscrete) {
            ov.witness_eps = eps;
            ov.witness_gap = std::max(ev.gap_full, ev.gap_half);
          }
          ov.verdict = Verdict::kNotMeanAp;
        }
        ov.details.push_back(ev);
      }
    }
    if (ov.verdict == Verdict::kNotMeanAp) {
      report.overall = Verdict::kNotMeanAp;
    }
    report.verdicts.push_back(std::move(ov));
  }
  return report;
}

}  // namespace specdiff
