#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "specdiff/systems.hpp"

namespace specdiff {

struct MeanApParams {
  std::int64_t horizon = 100000;  // N: the limsup is truncated at [-N, N]
  std::int64_t t_max = 1000;      // shifts probed in [-T, T]
  std::vector<double> eps_grid = {0.5, 0.2, 0.1};
  // gap bound per epsilon; when unset: 4 * (smallest nonzero almost period
  // detected at that epsilon), capped at t_max/4
  std::optional<std::int64_t> k_max_override;

  void validate() const;  // horizon >= 10 * t_max, eps positive decreasing
};

// finite-horizon mean of |h(s) - h(s+t)| over the overlap of the two-sided
// window h (length 2N+1, index s+N); zero at t = 0, symmetric in t.
// Rejects |t| > N/10.
double mean_seminorm_diff(const std::vector<cplx>& h, std::int64_t t,
                          std::int64_t n_half);

// the curve t -> mean_seminorm_diff(h, t, n_half) for t = 0..t_max
std::vector<double> seminorm_curve(const std::vector<cplx>& h,
                                   std::int64_t n_half, std::int64_t t_max);

// all t in [-t_max, t_max] with seminorm < eps; always contains 0
std::vector<std::int64_t> eps_almost_periods(const std::vector<cplx>& h,
                                             double eps,
                                             const MeanApParams& params);

// Maximum circular gap between consecutive shifts inside
// [-t_max + margin, t_max - margin], margin = t_max/10; a lone {0} scores
// the full window span. Rejects an empty or 0-less list.
std::int64_t relative_denseness_gap(const std::vector<std::int64_t>& shifts,
                                    std::int64_t t_max);

enum class Verdict { kConsistentWithDiscrete, kNotMeanAp };

std::string verdict_name(Verdict v);

struct EpsVerdict {
  double eps = 0.0;
  std::int64_t k_max = 0;
  std::int64_t smallest_period_full = 0;  // 0 when none detected
  std::int64_t gap_full = 0;
  std::int64_t gap_half = 0;
  bool dense_full = false;
  bool dense_half = false;  // companion run at horizon N/2
};

struct ObservableVerdict {
  std::string observable;
  Verdict verdict = Verdict::kNotMeanAp;
  bool horizons_agree = true;
  double witness_eps = 0.0;       // failing epsilon when NOT_MEAN_AP
  std::int64_t witness_gap = 0;   // its gap
  std::vector<EpsVerdict> details;  // one entry per (trial, eps)
};

struct ClassifyReport {
  std::string system;
  std::int64_t trials = 0;
  std::vector<ObservableVerdict> verdicts;
  Verdict overall = Verdict::kNotMeanAp;
};

// For each observable and each of `trials` sampled points, tests whether
// every epsilon in the grid yields a relatively dense almost-period set at
// both horizons N and N/2. The per-observable verdict is the conjunction
// over trials, epsilons and horizons; the overall verdict is the
// conjunction over observables.
ClassifyReport classify_discrete_spectrum(const SystemSpec& spec,
                                          const std::vector<Observable>& obs,
                                          const MeanApParams& params,
                                          std::int64_t trials,
                                          std::uint64_t seed);

}  // namespace specdiff
