#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "specdiff/estimators.hpp"
#include "specdiff/torus_measure.hpp"

namespace specdiff {

struct DiffractionParams {
  std::int64_t grid = 4096;
  std::int64_t kernel_order = 50;
  double atom_threshold_rel = 0.05;  // tau = rel * c_0
  std::int64_t scan_grid = 0;        // 0: choose max(grid, 4K+2)

  void validate() const;
};

// Bochner transform with atom/continuous decomposition: atoms extracted by
// the Cesaro scan, then the atom coefficients are subtracted and the
// remainder is Fejer-smoothed (atom-first subtraction keeps the mass
// conservation test meaningful; smoothing would leak atom mass into
// neighboring bins). Throws if the detected atom masses exceed c_0.
TorusMeasure diffraction_measure(const PosDefSequence& c, std::int64_t grid,
                                 std::int64_t kernel_order,
                                 double atom_threshold,
                                 std::int64_t scan_grid = 0);

struct MeasureDistance {
  double coeff_sup = 0.0;  // sup_{|n|<=K} |a^(n) - b^(n)|
  double cdf_sup = 0.0;    // sup over the grid of |CDF_a - CDF_b|
};

// Fourier coefficients are recomputed from atoms plus density quadrature;
// requires equal density grids.
MeasureDistance compare_measures(const TorusMeasure& a, const TorusMeasure& b,
                                 std::int64_t lag_horizon);

// End-to-end pipeline for one observable: sample a point, estimate the
// autocorrelation along the orbit, estimate the spectral coefficients by
// Monte Carlo, Bochner-transform both, and compare. When out_dir is
// non-empty, coefficients and measures are persisted there.
struct SpectrumReport {
  std::string system;
  std::string observable;
  double orbit_c0 = 0.0;
  double mc_c0 = 0.0;
  double two_estimator_sup = 0.0;  // coefficient-level distance of the routes
  MeasureDistance distance;        // measure-level distance
  double pp_energy_orbit = 0.0;
  double pp_energy_mc = 0.0;
  std::vector<Atom> atoms_orbit;
  std::vector<Atom> atoms_mc;
  double conservation_gap_orbit = 0.0;  // |atom mass + density mass - c_0|
  double conservation_gap_mc = 0.0;
  std::vector<std::string> files;
};

SpectrumReport spectrum_report(const SystemSpec& spec, const Observable& f,
                               const EstimatorParams& est,
                               const DiffractionParams& diff,
                               const std::filesystem::path& out_dir = {},
                               const std::string& label = {});

}  // namespace specdiff
