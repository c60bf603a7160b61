#pragma once

#include <cstdint>
#include <vector>

#include "specdiff/pos_def_sequence.hpp"

namespace specdiff {

// Fejer-smoothed inversion of a coefficient window: samples of
//   d(xi_j) = sum_{|n|<=L} (1 - |n|/(L+1)) c_n e^{-2 pi i n xi_j},
// xi_j = j/grid. Values are real (Hermitian window); for an exactly positive
// definite c they are >= -1e-9 c_0 by kernel positivity, and their mean over
// the grid equals c_0 exactly when grid > 2L.
// Requires L <= K and grid >= 4L (and grid >= 1).
std::vector<double> bochner_density(const PosDefSequence& c,
                                    std::int64_t grid,
                                    std::int64_t kernel_order);

// same inversion on a raw Hermitian window (index n+K); used for residual
// sequences that need not satisfy |c_n| <= c_0
std::vector<double> bochner_density_window(const std::vector<cplx>& full,
                                           std::int64_t grid,
                                           std::int64_t kernel_order);

// Cesaro average (1/(2K+1)) sum_{|n|<=K} c_n e^{-2 pi i n xi}. For spectral
// coefficient sequences this converges to the mass of the atom at xi.
double wiener_atom_mass(const PosDefSequence& c, double xi);

// (1/(2K+1)) sum_{|n|<=K} |c_n|^2 — estimates sum of squared atom masses.
double wiener_pp_energy(const PosDefSequence& c);

struct Atom {
  double xi = 0.0;    // frequency in [0, 1)
  double mass = 0.0;  // positive
};

// Scan the Cesaro average over a grid, refine each local maximum above
// `threshold` by golden-section search, and merge detections closer than
// 1/(4K). Deterministic for fixed inputs; atoms are returned sorted by
// frequency. The grid is internally raised to at least 2K+2 points so the
// scan cannot alias the coefficient window.
std::vector<Atom> atom_scan(const PosDefSequence& c, double threshold,
                            std::int64_t grid);

}  // namespace specdiff
