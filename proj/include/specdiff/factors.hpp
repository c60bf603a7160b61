#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "specdiff/estimators.hpp"
#include "specdiff/systems.hpp"

namespace specdiff {

// Truncated image of a state under the factor map induced by f:
// window[t + half_width] = f(alpha_{-t} x) for t in [-W, W].
struct FactorPoint {
  std::vector<cplx> window;
  std::int64_t half_width = 0;
  std::string center;

  cplx at(std::int64_t t) const {
    return window.at(static_cast<std::size_t>(t + half_width));
  }
};

FactorPoint factor_point(const SystemSpec& spec, const Observable& f,
                         const State& x, std::int64_t half_width);

// Autocorrelation computed on the factor side: sample a point, take its
// factor image window, and correlate that window with itself. On finite
// cyclic systems the window is one full period and the correlation is
// circular, which reproduces the invariant-measure coefficients exactly;
// elsewhere the window has length orbit_length and the estimator is the
// usual windowed one.
PosDefSequence factor_autocorrelation(const SystemSpec& spec,
                                      const Observable& f,
                                      const EstimatorParams& params);

// sup_{|n|<=K} difference between the two sides of the factor-diffraction
// identity: coefficients of |phi^|^2 gamma^ versus <U^n g, g> for
// g = N^f(phi). Exact sums on finite cyclic systems, Monte Carlo elsewhere.
double factor_transfer_residual(const SystemSpec& spec,
                                const Observable& f, const TestFunction& phi,
                                const EstimatorParams& params);

// delta_0(Phi^f_x) == f(x) on `samples` invariant-measure draws
bool correspondence_check(const SystemSpec& spec, const Observable& f,
                          std::int64_t samples, std::uint64_t seed);

}  // namespace specdiff
