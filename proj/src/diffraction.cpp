#include "specdiff/diffraction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "specdiff/fft.hpp"
#include "specdiff/rng.hpp"
#include "specdiff/serialize.hpp"

namespace specdiff {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// density quadrature coefficients for |n| <= horizon via one DFT:
// coeff(n) = (1/G) sum_j d_j e^{+2 pi i n j / G}
std::vector<cplx> density_coefficients(const TorusMeasure& m,
                                       std::int64_t horizon) {
  const std::int64_t g = m.grid();
  std::vector<cplx> buf(static_cast<std::size_t>(g));
  for (std::int64_t j = 0; j < g; ++j) {
    buf[static_cast<std::size_t>(j)] =
        cplx{m.density()[static_cast<std::size_t>(j)], 0.0};
  }
  std::vector<cplx> spec = fft_forward(buf);
  std::vector<cplx> out(static_cast<std::size_t>(2 * horizon + 1));
  for (std::int64_t n = -horizon; n <= horizon; ++n) {
    const std::int64_t bin = (((-n) % g) + g) % g;
    out[static_cast<std::size_t>(n + horizon)] =
        spec[static_cast<std::size_t>(bin)] / static_cast<double>(g);
  }
  return out;
}

cplx atom_coefficient(const std::vector<Atom>& atoms, std::int64_t n) {
  cplx acc{0.0, 0.0};
  for (const Atom& a : atoms) {
    const double ang = kTwoPi * static_cast<double>(n) * a.xi;
    acc += a.mass * cplx{std::cos(ang), std::sin(ang)};
  }
  return acc;
}

}  // namespace

void DiffractionParams::validate() const {
  if (grid < 1 || kernel_order < 0 || grid < 4 * kernel_order) {
    throw std::invalid_argument(
        "diffraction: need grid >= 4 * kernel_order >= 0");
  }
  if (atom_threshold_rel <= 0.0) {
    throw std::invalid_argument("diffraction: atom threshold must be positive");
  }
}

TorusMeasure diffraction_measure(const PosDefSequence& c, std::int64_t grid,
                                 std::int64_t kernel_order,
                                 double atom_threshold,
                                 std::int64_t scan_grid) {
  if (kernel_order > c.max_lag()) {
    throw std::invalid_argument(
        "diffraction_measure: kernel order exceeds the lag window");
  }
  const std::int64_t k = c.max_lag();
  const std::int64_t scan =
      scan_grid > 0 ? scan_grid : std::max(grid, 4 * k + 2);
  std::vector<Atom> atoms = atom_scan(c, atom_threshold, scan);

  double atom_sum = 0.0;
  for (const Atom& a : atoms) atom_sum += a.mass;
  if (atom_sum > c.c0() * (1.0 + 1e-9) + 1e-12) {
    throw std::invalid_argument(
        "diffraction_measure: detected atom masses exceed c_0 "
        "(over-detection)");
  }

  // subtract the atoms' coefficients, smooth the remainder
  std::vector<cplx> residual = c.full();
  for (std::int64_t n = -k; n <= k; ++n) {
    residual[static_cast<std::size_t>(n + k)] -= atom_coefficient(atoms, n);
  }
  std::vector<double> density =
      bochner_density_window(residual, grid, kernel_order);
  double clipped = 0.0;
  for (double& d : density) {
    if (d < 0.0) {
      clipped += -d;
      d = 0.0;
    }
  }
  clipped /= static_cast<double>(grid);
  return TorusMeasure(std::move(atoms), std::move(density), kernel_order, k,
                      c.c0(), clipped, c.provenance());
}

MeasureDistance compare_measures(const TorusMeasure& a, const TorusMeasure& b,
                                 std::int64_t lag_horizon) {
  if (a.grid() != b.grid()) {
    throw std::invalid_argument("compare_measures: density grids differ");
  }
  MeasureDistance d;
  const auto da = density_coefficients(a, lag_horizon);
  const auto db = density_coefficients(b, lag_horizon);
  for (std::int64_t n = -lag_horizon; n <= lag_horizon; ++n) {
    const cplx ca = atom_coefficient(a.atoms(), n) +
                    da[static_cast<std::size_t>(n + lag_horizon)];
    const cplx cb = atom_coefficient(b.atoms(), n) +
                    db[static_cast<std::size_t>(n + lag_horizon)];
    d.coeff_sup = std::max(d.coeff_sup, std::abs(ca - cb));
  }
  const auto fa = a.cdf_grid();
  const auto fb = b.cdf_grid();
  for (std::size_t j = 0; j < fa.size(); ++j) {
    d.cdf_sup = std::max(d.cdf_sup, std::abs(fa[j] - fb[j]));
  }
  return d;
}

SpectrumReport spectrum_report(const SystemSpec& spec, const Observable& f,
                               const EstimatorParams& est,
                               const DiffractionParams& diff,
                               const std::filesystem::path& out_dir,
                               const std::string& label) {
  est.validate();
  diff.validate();

  const std::int64_t extent =
      std::max(std::llabs(f.coord_min()), std::llabs(f.coord_max()));
  const State x = sample_invariant(spec, derive_seed(est.seed, "orbit-state"),
                                   est.orbit_length + extent + 1);
  const SampledSignal sig = orbit_samples(spec, f, x, est.orbit_length);
  const PosDefSequence c_orbit = empirical_autocorrelation(sig, est.max_lag);
  const PosDefSequence c_mc = spectral_coefficients_mc(spec, f, est);

  SpectrumReport rep;
  rep.system = spec.name();
  rep.observable = f.name();
  rep.orbit_c0 = c_orbit.c0();
  rep.mc_c0 = c_mc.c0();
  for (std::int64_t n = -est.max_lag; n <= est.max_lag; ++n) {
    rep.two_estimator_sup =
        std::max(rep.two_estimator_sup, std::abs(c_orbit.at(n) - c_mc.at(n)));
  }

  const TorusMeasure m_orbit = diffraction_measure(
      c_orbit, diff.grid, diff.kernel_order,
      diff.atom_threshold_rel * std::max(c_orbit.c0(), 1e-12), diff.scan_grid);
  const TorusMeasure m_mc = diffraction_measure(
      c_mc, diff.grid, diff.kernel_order,
      diff.atom_threshold_rel * std::max(c_mc.c0(), 1e-12), diff.scan_grid);

  rep.distance = compare_measures(m_orbit, m_mc, est.max_lag);
  rep.pp_energy_orbit = wiener_pp_energy(c_orbit);
  rep.pp_energy_mc = wiener_pp_energy(c_mc);
  rep.atoms_orbit = m_orbit.atoms();
  rep.atoms_mc = m_mc.atoms();
  rep.conservation_gap_orbit = std::abs(
      m_orbit.atom_mass_sum() + m_orbit.density_mass() - m_orbit.total_mass());
  rep.conservation_gap_mc = std::abs(m_mc.atom_mass_sum() +
                                     m_mc.density_mass() - m_mc.total_mass());

  if (!out_dir.empty()) {
    const std::string stem =
        label.empty() ? (spec.name() + "_" + f.name()) : label;
    auto persist = [&rep, &out_dir](const std::string& name,
                                    const std::string& content) {
      write_text_file(out_dir / name, content);
      rep.files.push_back(name);
    };
    persist(stem + "_orbit_coeffs.csv", to_csv(c_orbit));
    persist(stem + "_mc_coeffs.csv", to_csv(c_mc));
    persist(stem + "_orbit_measure.json", dump_json(to_json(m_orbit)));
    persist(stem + "_orbit_measure.csv", density_csv(m_orbit));
    persist(stem + "_orbit_measure.atoms.csv", atoms_csv(m_orbit));
    persist(stem + "_mc_measure.json", dump_json(to_json(m_mc)));
    persist(stem + "_mc_measure.csv", density_csv(m_mc));
    persist(stem + "_mc_measure.atoms.csv", atoms_csv(m_mc));
  }
  return rep;
}

}  // namespace specdiff
