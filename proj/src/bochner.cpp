#include "specdiff/bochner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "specdiff/fft.hpp"

namespace specdiff {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// fold a Hermitian window scaled by per-lag weights onto a length-`grid`
// buffer and evaluate sum_n w_n c_n e^{-2 pi i n j / grid} for all j by DFT
std::vector<double> folded_grid_sum(const std::vector<cplx>& full,
                                    std::int64_t grid, std::int64_t lags,
                                    const std::vector<double>& weights) {
  const std::int64_t k = static_cast<std::int64_t>(full.size() / 2);
  std::vector<cplx> buf(static_cast<std::size_t>(grid), cplx{0.0, 0.0});
  for (std::int64_t n = -lags; n <= lags; ++n) {
    const std::int64_t m = ((n % grid) + grid) % grid;
    buf[static_cast<std::size_t>(m)] +=
        weights[static_cast<std::size_t>(std::llabs(n))] *
        full[static_cast<std::size_t>(n + k)];
  }
  std::vector<cplx> spec = fft_forward(buf);
  std::vector<double> out(static_cast<std::size_t>(grid));
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = spec[j].real();
  return out;
}

std::vector<double> fejer_weights(std::int64_t order) {
  std::vector<double> w(static_cast<std::size_t>(order) + 1);
  for (std::int64_t n = 0; n <= order; ++n) {
    w[static_cast<std::size_t>(n)] =
        1.0 - static_cast<double>(n) / static_cast<double>(order + 1);
  }
  return w;
}

}  // namespace

std::vector<double> bochner_density(const PosDefSequence& c,
                                    std::int64_t grid,
                                    std::int64_t kernel_order) {
  if (kernel_order > c.max_lag()) {
    throw std::invalid_argument("bochner_density: kernel order exceeds max lag");
  }
  return bochner_density_window(c.full(), grid, kernel_order);
}

std::vector<double> bochner_density_window(const std::vector<cplx>& full,
                                           std::int64_t grid,
                                           std::int64_t kernel_order) {
  const std::int64_t L = kernel_order;
  if (full.empty() || full.size() % 2 == 0 ||
      L > static_cast<std::int64_t>(full.size() / 2)) {
    throw std::invalid_argument("bochner_density: bad coefficient window");
  }
  if (L < 0 || grid < 1 || grid < 4 * L) {
    throw std::invalid_argument("bochner_density: need grid >= 4 * kernel_order");
  }
  return folded_grid_sum(full, grid, L, fejer_weights(L));
}

double wiener_atom_mass(const PosDefSequence& c, double xi) {
  const std::int64_t K = c.max_lag();
  if (K < 1) throw std::invalid_argument("wiener_atom_mass: need K >= 1");
  double acc = c.c0();
  for (std::int64_t n = 1; n <= K; ++n) {
    const double ang = -kTwoPi * static_cast<double>(n) * xi;
    const cplx z = c.at(n) * cplx{std::cos(ang), std::sin(ang)};
    acc += 2.0 * z.real();  // the -n term is the conjugate
  }
  return acc / static_cast<double>(2 * K + 1);
}

double wiener_pp_energy(const PosDefSequence& c) {
  const std::int64_t K = c.max_lag();
  if (K < 1) throw std::invalid_argument("wiener_pp_energy: need K >= 1");
  double acc = 0.0;
  for (std::int64_t n = -K; n <= K; ++n) acc += std::norm(c.at(n));
  return acc / static_cast<double>(2 * K + 1);
}

namespace {

double wiener_window(const std::vector<cplx>& full, std::int64_t k,
                     double xi) {
  double acc = full[static_cast<std::size_t>(k)].real();
  for (std::int64_t n = 1; n <= k; ++n) {
    const double ang = -kTwoPi * static_cast<double>(n) * xi;
    const cplx z = full[static_cast<std::size_t>(k + n)] *
                   cplx{std::cos(ang), std::sin(ang)};
    acc += 2.0 * z.real();
  }
  return acc / static_cast<double>(2 * k + 1);
}

double frac01(double x) { return x - std::floor(x); }

// golden-section maximization of the Cesaro average around grid bin j
Atom refine_peak(const std::vector<cplx>& full, std::int64_t k,
                 std::int64_t j, std::int64_t grid) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = (static_cast<double>(j) - 1.0) / static_cast<double>(grid);
  double hi = (static_cast<double>(j) + 1.0) / static_cast<double>(grid);
  double x1 = hi - invphi * (hi - lo);
  double x2 = lo + invphi * (hi - lo);
  double f1 = wiener_window(full, k, frac01(x1));
  double f2 = wiener_window(full, k, frac01(x2));
  for (int it = 0; it < 64; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = wiener_window(full, k, frac01(x2));
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = wiener_window(full, k, frac01(x1));
    }
  }
  const double xi = frac01(0.5 * (lo + hi));
  return Atom{xi, wiener_window(full, k, xi)};
}

}  // namespace

std::vector<Atom> atom_scan(const PosDefSequence& c, double threshold,
                            std::int64_t grid) {
  if (threshold <= 0.0) {
    throw std::invalid_argument("atom_scan: threshold must be positive");
  }
  const std::int64_t K = c.max_lag();
  if (K < 1) throw std::invalid_argument("atom_scan: need K >= 1");
  const std::int64_t G = std::max<std::int64_t>(grid, 2 * K + 2);
  const std::vector<double> w(static_cast<std::size_t>(K) + 1,
                              1.0 / static_cast<double>(2 * K + 1));

  // Peel atoms one at a time: take the strongest grid peak, refine it,
  // subtract its coefficient contribution, rescan. A single atom's Cesaro
  // average carries Dirichlet sidelobes of ~13% of its mass, so scanning
  // once and keeping every local maximum above the threshold would turn one
  // genuine atom into a comb of spurious ones.
  std::vector<cplx> remaining = c.full();
  std::vector<Atom> found;
  const std::int64_t max_atoms =
      2 + static_cast<std::int64_t>(c.c0() / threshold);
  while (static_cast<std::int64_t>(found.size()) < max_atoms) {
    const std::vector<double> scan = folded_grid_sum(remaining, G, K, w);
    std::int64_t best = 0;
    for (std::int64_t j = 1; j < G; ++j) {
      if (scan[static_cast<std::size_t>(j)] >
          scan[static_cast<std::size_t>(best)]) {
        best = j;
      }
    }
    if (scan[static_cast<std::size_t>(best)] <= threshold) break;
    const Atom a = refine_peak(remaining, K, best, G);
    if (a.mass <= threshold) break;
    found.push_back(a);
    for (std::int64_t n = -K; n <= K; ++n) {
      const double ang = kTwoPi * static_cast<double>(n) * a.xi;
      remaining[static_cast<std::size_t>(n + K)] -=
          a.mass * cplx{std::cos(ang), std::sin(ang)};
    }
  }

  // merge detections closer than the estimator's resolution limit
  std::sort(found.begin(), found.end(),
            [](const Atom& a, const Atom& b) { return a.xi < b.xi; });
  const double radius = 1.0 / (4.0 * static_cast<double>(K));
  std::vector<Atom> merged;
  for (const Atom& a : found) {
    if (!merged.empty() && a.xi - merged.back().xi < radius) {
      merged.back().mass += a.mass;  // one atom seen twice
    } else {
      merged.push_back(a);
    }
  }
  if (merged.size() > 1 &&
      (merged.front().xi + 1.0 - merged.back().xi) < radius) {
    merged.front().mass += merged.back().mass;
    merged.pop_back();
  }
  std::vector<Atom> out;
  for (const Atom& a : merged) {
    if (a.mass > threshold) out.push_back(a);
  }
  return out;
}

}  // namespace specdiff
