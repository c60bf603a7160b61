#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "specdiff/bochner.hpp"

namespace specdiff {

// A positive measure on the torus (parameterized as [0,1) via z = e^{2 pi i
// xi}) split into a pure-point part (atoms) and a Fejer-smoothed continuous
// density sampled on a uniform frequency grid.
class TorusMeasure {
 public:
  // density: grid samples at xi_j = j/grid, clipped to be nonnegative;
  // clipped_mass records how much (quadrature) mass the clipping removed.
  TorusMeasure(std::vector<Atom> atoms, std::vector<double> density,
               std::int64_t kernel_order, std::int64_t source_max_lag,
               double total_mass, double clipped_mass = 0.0,
               std::string provenance = {});

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<double>& density() const { return density_; }
  std::int64_t grid() const {
    return static_cast<std::int64_t>(density_.size());
  }
  std::int64_t kernel_order() const { return kernel_order_; }
  std::int64_t source_max_lag() const { return source_max_lag_; }
  double total_mass() const { return total_mass_; }
  double clipped_mass() const { return clipped_mass_; }
  const std::string& provenance() const { return provenance_; }

  double atom_mass_sum() const;
  // quadrature mass of the density (mean of the grid samples)
  double density_mass() const;

  // n-th Fourier coefficient, atoms plus density quadrature. When
  // fejer_weight_atoms is set, the atom contribution carries the same
  // (1 - |n|/(L+1)) damping the density already carries, so the result is
  // exactly comparable with Fejer-weighted input coefficients.
  cplx fourier_coefficient(std::int64_t n, bool fejer_weight_atoms = false) const;

  // cumulative distribution sampled at xi_j = j/grid, j = 0..grid
  // (trapezoid quadrature of the density plus atom steps)
  std::vector<double> cdf_grid() const;

 private:
  std::vector<Atom> atoms_;
  std::vector<double> density_;
  std::int64_t kernel_order_ = 0;
  std::int64_t source_max_lag_ = 0;
  double total_mass_ = 0.0;
  double clipped_mass_ = 0.0;
  std::string provenance_;
};

}  // namespace specdiff
