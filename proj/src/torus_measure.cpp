#include "specdiff/torus_measure.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace specdiff {

TorusMeasure::TorusMeasure(std::vector<Atom> atoms,
                           std::vector<double> density,
                           std::int64_t kernel_order,
                           std::int64_t source_max_lag, double total_mass,
                           double clipped_mass, std::string provenance)
    : atoms_(std::move(atoms)),
      density_(std::move(density)),
      kernel_order_(kernel_order),
      source_max_lag_(source_max_lag),
      total_mass_(total_mass),
      clipped_mass_(clipped_mass),
      provenance_(std::move(provenance)) {
  if (density_.empty()) {
    throw std::invalid_argument("TorusMeasure: empty density grid");
  }
  double prev = -1.0;
  double mass_sum = 0.0;
  for (const Atom& a : atoms_) {
    if (a.xi < 0.0 || a.xi >= 1.0) {
      throw std::invalid_argument("TorusMeasure: atom frequency outside [0,1)");
    }
    if (a.xi <= prev) {
      throw std::invalid_argument(
          "TorusMeasure: atoms must be sorted with distinct frequencies");
    }
    if (a.mass <= 0.0) {
      throw std::invalid_argument("TorusMeasure: atom mass must be positive");
    }
    prev = a.xi;
    mass_sum += a.mass;
  }
  if (mass_sum > total_mass_ + 1e-9 * std::max(1.0, total_mass_)) {
    throw std::invalid_argument(
        "TorusMeasure: atom masses exceed the total mass");
  }
}

double TorusMeasure::atom_mass_sum() const {
  double s = 0.0;
  for (const Atom& a : atoms_) s += a.mass;
  return s;
}

double TorusMeasure::density_mass() const {
  double s = 0.0;
  for (double d : density_) s += d;
  return s / static_cast<double>(density_.size());
}

cplx TorusMeasure::fourier_coefficient(std::int64_t n,
                                       bool fejer_weight_atoms) const {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double atom_weight = 1.0;
  if (fejer_weight_atoms) {
    const double l1 = static_cast<double>(kernel_order_ + 1);
    atom_weight = std::max(0.0, 1.0 - static_cast<double>(std::llabs(n)) / l1);
  }
  cplx acc{0.0, 0.0};
  for (const Atom& a : atoms_) {
    const double ang = kTwoPi * static_cast<double>(n) * a.xi;
    acc += atom_weight * a.mass * cplx{std::cos(ang), std::sin(ang)};
  }
  const std::int64_t g = grid();
  cplx dacc{0.0, 0.0};
  for (std::int64_t j = 0; j < g; ++j) {
    const double ang = kTwoPi * static_cast<double>(n) *
                       (static_cast<double>(j) / static_cast<double>(g));
    dacc += density_[static_cast<std::size_t>(j)] *
            cplx{std::cos(ang), std::sin(ang)};
  }
  return acc + dacc / static_cast<double>(g);
}

std::vector<double> TorusMeasure::cdf_grid() const {
  const std::int64_t g = grid();
  std::vector<double> cdf(static_cast<std::size_t>(g) + 1, 0.0);
  const double h = 1.0 / static_cast<double>(g);
  std::size_t atom_idx = 0;
  double acc = 0.0;
  for (std::int64_t j = 1; j <= g; ++j) {
    const double left = density_[static_cast<std::size_t>(j - 1)];
    const double right =
        density_[static_cast<std::size_t>(j % g)];  // periodic sample
    acc += 0.5 * h * (left + right);
    const double xi = static_cast<double>(j) * h;
    while (atom_idx < atoms_.size() && atoms_[atom_idx].xi < xi) {
      acc += atoms_[atom_idx].mass;
      ++atom_idx;
    }
    cdf[static_cast<std::size_t>(j)] = acc;
  }
  return cdf;
}

}  // namespace specdiff
