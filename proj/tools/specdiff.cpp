// Command-line driver: estimate autocorrelations over the built-in systems
// by both routes, Bochner-transform them into measures on the torus, check
// the factor identities, and classify discrete spectrum via mean almost
// periodicity.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "specdiff/config.hpp"
#include "specdiff/factors.hpp"
#include "specdiff/report.hpp"
#include "specdiff/rng.hpp"
#include "specdiff/serialize.hpp"

namespace {

using namespace specdiff;

nlohmann::json catalog() {
  nlohmann::json j = nlohmann::json::array();
  j.push_back({{"name", "fibonacci"},
               {"kind", "substitution"},
               {"rules", {{"a", "ab"}, {"b", "a"}}},
               {"observables", {"pm1", "indicator:a", "indicator-centered:a"}}});
  j.push_back({{"name", "thue-morse"},
               {"kind", "substitution"},
               {"rules", {{"a", "ab"}, {"b", "ba"}}},
               {"observables", {"pm1", "indicator:a"}}});
  j.push_back({{"name", "period-doubling"},
               {"kind", "substitution"},
               {"rules", {{"a", "ab"}, {"b", "aa"}}},
               {"observables", {"pm1", "indicator:a"}}});
  j.push_back({{"name", "rotation"},
               {"kind", "rotation"},
               {"parameters", {{"alpha", "frequency in (0,1); default (sqrt(5)-1)/2"}}},
               {"observables", {"character", "character:k"}}});
  j.push_back({{"name", "bernoulli"},
               {"kind", "bernoulli"},
               {"parameters", {{"letters", "ab"}, {"probs", {0.5, 0.5}}}},
               {"observables", {"pm1", "origin", "indicator:a"}}});
  j.push_back({{"name", "cyclic"},
               {"kind", "cyclic"},
               {"parameters", {{"size", 12}, {"step", 1}, {"weights", "uniform"}}},
               {"observables", {"weights:...", "indicator:..."}}});
  return j;
}

std::filesystem::path out_dir_override(std::filesystem::path configured) {
  if (const char* env = std::getenv("SPECDIFF_OUTPUT_DIR")) {
    return env;
  }
  return configured;
}

PosDefSequence estimate(const SystemSpec& spec, const Observable& f,
                        const EstimatorParams& params, bool use_mc) {
  if (use_mc) return spectral_coefficients_mc(spec, f, params);
  const std::int64_t extent =
      std::max(std::llabs(f.coord_min()), std::llabs(f.coord_max()));
  const State x = sample_invariant(spec, derive_seed(params.seed, "orbit-state"),
                                   params.orbit_length + extent + 1);
  return empirical_autocorrelation(
      orbit_samples(spec, f, x, params.orbit_length), params.max_lag);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral measures of Z-dynamical systems as diffraction"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  // list-systems ------------------------------------------------------------
  auto* list_cmd = app.add_subcommand("list-systems", "print the catalog");
  bool list_json = false;
  list_cmd->add_flag("--json", list_json, "machine-readable output");

  // sample ------------------------------------------------------------------
  auto* sample_cmd =
      app.add_subcommand("sample", "draw invariant-measure samples");
  std::string sample_system;
  std::uint64_t sample_seed = 0;
  std::int64_t sample_count = 1, sample_horizon = 16;
  sample_cmd->add_option("--system", sample_system)->required();
  sample_cmd->add_option("--seed", sample_seed)->required();
  sample_cmd->add_option("--count", sample_count);
  sample_cmd->add_option("--horizon", sample_horizon);

  // autocorr ----------------------------------------------------------------
  auto* auto_cmd =
      app.add_subcommand("autocorr", "estimate autocorrelation coefficients");
  std::string ac_system, ac_observable, ac_out;
  std::int64_t ac_lags = 50, ac_orbit = 100000, ac_mc = 0;
  std::uint64_t ac_seed = 0;
  auto_cmd->add_option("--system", ac_system)->required();
  auto_cmd->add_option("--observable", ac_observable)->required();
  auto_cmd->add_option("--lags", ac_lags);
  auto_cmd->add_option("--orbit", ac_orbit);
  auto_cmd->add_option("--mc", ac_mc, "Monte Carlo route with this many samples");
  auto_cmd->add_option("--seed", ac_seed)->required();
  auto_cmd->add_option("--out", ac_out)->required();

  // spectrum ----------------------------------------------------------------
  auto* spec_cmd =
      app.add_subcommand("spectrum", "emit the diffraction measure");
  std::string sp_system, sp_observable, sp_out;
  std::int64_t sp_lags = 50, sp_orbit = 100000, sp_mc = 0, sp_grid = 4096,
               sp_kernel = 50, sp_scan = 0;
  double sp_tau = 0.05;
  std::uint64_t sp_seed = 0;
  spec_cmd->add_option("--system", sp_system)->required();
  spec_cmd->add_option("--observable", sp_observable)->required();
  spec_cmd->add_option("--lags", sp_lags);
  spec_cmd->add_option("--orbit", sp_orbit);
  spec_cmd->add_option("--mc", sp_mc, "Monte Carlo route with this many samples");
  spec_cmd->add_option("--grid", sp_grid);
  spec_cmd->add_option("--kernel-order", sp_kernel);
  spec_cmd->add_option("--tau", sp_tau, "atom threshold relative to c_0");
  spec_cmd->add_option("--scan-grid", sp_scan);
  spec_cmd->add_option("--seed", sp_seed)->required();
  spec_cmd->add_option("--out", sp_out, "measure.json path")->required();

  // compare -----------------------------------------------------------------
  auto* cmp_cmd =
      app.add_subcommand("compare", "distance between two measure files");
  std::string cmp_a, cmp_b;
  std::int64_t cmp_lags = 50;
  double cmp_tol = -1.0;
  cmp_cmd->add_option("a", cmp_a)->required();
  cmp_cmd->add_option("b", cmp_b)->required();
  cmp_cmd->add_option("--lags", cmp_lags);
  cmp_cmd->add_option("--tol", cmp_tol,
                      "exit 1 when the coefficient distance exceeds this");

  // factor-check --------------------------------------------------------- --
  auto* fac_cmd =
      app.add_subcommand("factor-check", "run the factor identity checks");
  std::string fc_system, fc_observable, fc_out;
  std::uint64_t fc_seed = 0;
  std::int64_t fc_lags = 20, fc_orbit = 40000, fc_mc = 20000;
  double fc_tol = -1.0;
  fac_cmd->add_option("--system", fc_system)->required();
  fac_cmd->add_option("--observable", fc_observable)->required();
  fac_cmd->add_option("--lags", fc_lags);
  fac_cmd->add_option("--orbit", fc_orbit);
  fac_cmd->add_option("--mc", fc_mc);
  fac_cmd->add_option("--tol", fc_tol, "pass/fail bound on the residuals");
  fac_cmd->add_option("--seed", fc_seed)->required();
  fac_cmd->add_option("--out", fc_out);

  // classify ------------------------------------------------------------ --
  auto* cls_cmd =
      app.add_subcommand("classify", "mean almost periodicity classifier");
  std::string cl_system, cl_observables = "pm1", cl_eps = "0.5,0.2,0.1",
              cl_out;
  std::int64_t cl_horizon = 100000, cl_tmax = 1000, cl_trials = 2;
  std::uint64_t cl_seed = 0;
  cls_cmd->add_option("--system", cl_system)->required();
  cls_cmd->add_option("--observables", cl_observables, "comma separated");
  cls_cmd->add_option("--eps", cl_eps, "comma separated, decreasing");
  cls_cmd->add_option("--horizon", cl_horizon);
  cls_cmd->add_option("--t-max", cl_tmax);
  cls_cmd->add_option("--trials", cl_trials);
  cls_cmd->add_option("--seed", cl_seed)->required();
  cls_cmd->add_option("--out", cl_out);

  // report -------------------------------------------------------------- --
  auto* rep_cmd = app.add_subcommand("report", "full pipeline from a config");
  std::string rp_config, rp_out_dir;
  rep_cmd->add_option("--config", rp_config)->required();
  rep_cmd->add_option("--out-dir", rp_out_dir, "override the output dir");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (*list_cmd) {
      if (list_json) {
        std::cout << dump_json(catalog());
      } else {
        for (const auto& entry : catalog()) {
          std::cout << entry.at("name").get<std::string>() << "  ["
                    << entry.at("kind").get<std::string>() << "]\n";
          if (entry.contains("rules")) {
            for (const auto& [k, v] : entry.at("rules").items()) {
              std::cout << "    " << k << " -> " << v.get<std::string>()
                        << "\n";
            }
          }
          std::cout << "    observables:";
          for (const auto& o : entry.at("observables")) {
            std::cout << " " << o.get<std::string>();
          }
          std::cout << "\n";
        }
      }
      return 0;
    }

    if (*sample_cmd) {
      const SystemSpec spec = SystemSpec::built_in(sample_system);
      for (std::int64_t i = 0; i < sample_count; ++i) {
        const State x = sample_invariant(
            spec, derive_seed(sample_seed, "sample", static_cast<std::uint64_t>(i)),
            sample_horizon);
        std::cout << i << ": " << x.describe(spec) << "\n";
      }
      return 0;
    }

    if (*auto_cmd) {
      const SystemSpec spec = SystemSpec::built_in(ac_system);
      const Observable f = Observable::parse(spec, ac_observable);
      EstimatorParams params;
      params.max_lag = ac_lags;
      params.orbit_length = ac_orbit;
      params.mc_samples = ac_mc > 0 ? ac_mc : params.mc_samples;
      params.seed = ac_seed;
      params.validate();
      const PosDefSequence c = estimate(spec, f, params, ac_mc > 0);
      write_text_file(ac_out, to_csv(c));
      std::cout << "wrote " << ac_out << " (c_0 = " << format_double(c.c0())
                << ")\n";
      return 0;
    }

    if (*spec_cmd) {
      const SystemSpec spec = SystemSpec::built_in(sp_system);
      const Observable f = Observable::parse(spec, sp_observable);
      EstimatorParams params;
      params.max_lag = sp_lags;
      params.orbit_length = sp_orbit;
      params.mc_samples = sp_mc > 0 ? sp_mc : params.mc_samples;
      params.seed = sp_seed;
      params.validate();
      const PosDefSequence c = estimate(spec, f, params, sp_mc > 0);
      const TorusMeasure m = diffraction_measure(
          c, sp_grid, sp_kernel, sp_tau * std::max(c.c0(), 1e-12), sp_scan);
      std::filesystem::path json_path(sp_out);
      std::filesystem::path csv_path = json_path;
      csv_path.replace_extension(".csv");
      std::filesystem::path atoms_path = json_path;
      atoms_path.replace_extension(".atoms.csv");
      write_text_file(json_path, dump_json(to_json(m)));
      write_text_file(csv_path, density_csv(m));
      write_text_file(atoms_path, atoms_csv(m));
      std::cout << "atoms: " << m.atoms().size()
                << ", pp mass = " << format_double(m.atom_mass_sum())
                << ", continuous mass = " << format_double(m.density_mass())
                << "\n";
      return 0;
    }

    if (*cmp_cmd) {
      auto load = [](const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open " + path);
        nlohmann::json j;
        in >> j;
        return measure_from_json(j);
      };
      const TorusMeasure a = load(cmp_a);
      const TorusMeasure b = load(cmp_b);
      const MeasureDistance d = compare_measures(a, b, cmp_lags);
      std::cout << "coeff_sup_distance " << format_double(d.coeff_sup) << "\n"
                << "cdf_distance " << format_double(d.cdf_sup) << "\n";
      if (cmp_tol >= 0.0 && d.coeff_sup > cmp_tol) return 1;
      return 0;
    }

    if (*fac_cmd) {
      const SystemSpec spec = SystemSpec::built_in(fc_system);
      const Observable f = Observable::parse(spec, fc_observable);
      EstimatorParams params;
      params.max_lag = fc_lags;
      params.orbit_length = fc_orbit;
      params.mc_samples = fc_mc;
      params.seed = fc_seed;
      params.validate();

      const bool corr = correspondence_check(spec, f, 1000, fc_seed);
      const PosDefSequence c_factor = factor_autocorrelation(spec, f, params);
      PosDefSequence c_direct =
          spec.is_finite_cyclic()
              ? exact_coefficients_finite(spec, f, params.max_lag)
              : estimate(spec, f, params, false);
      double factor_sup = 0.0;
      for (std::int64_t n = -params.max_lag; n <= params.max_lag; ++n) {
        factor_sup =
            std::max(factor_sup, std::abs(c_factor.at(n) - c_direct.at(n)));
      }
      const TestFunction phi(0, {cplx{1.0, 0.0}, cplx{1.0, 0.0}});
      const double transfer = factor_transfer_residual(spec, f, phi, params);

      const double tol =
          fc_tol >= 0.0 ? fc_tol : (spec.is_finite_cyclic() ? 1e-9 : 5e-2);
      nlohmann::json j;
      j["system"] = spec.name();
      j["observable"] = f.name();
      j["correspondence"] = corr;
      j["factor_autocorrelation_sup"] = factor_sup;
      j["factor_transfer_residual"] = transfer;
      j["tolerance"] = tol;
      const bool pass = corr && factor_sup <= tol && transfer <= tol;
      j["pass"] = pass;
      const std::string text = dump_json(j);
      if (!fc_out.empty()) {
        write_text_file(fc_out, text);
      }
      std::cout << text;
      return pass ? 0 : 1;
    }

    if (*cls_cmd) {
      const SystemSpec spec = SystemSpec::built_in(cl_system);
      std::vector<Observable> obs;
      {
        std::stringstream ss(cl_observables);
        std::string item;
        while (std::getline(ss, item, ',')) {
          obs.push_back(Observable::parse(spec, item));
        }
      }
      MeanApParams params;
      params.horizon = cl_horizon;
      params.t_max = cl_tmax;
      params.eps_grid.clear();
      {
        std::stringstream ss(cl_eps);
        std::string item;
        while (std::getline(ss, item, ',')) {
          params.eps_grid.push_back(std::stod(item));
        }
      }
      params.validate();
      const ClassifyReport rep = classify_discrete_spectrum(
          spec, obs, params, cl_trials, derive_seed(cl_seed, "classify"));
      const nlohmann::json j = classify_report_to_json(rep);
      if (!cl_out.empty()) write_text_file(cl_out, dump_json(j));
      std::cout << dump_json(j);
      return 0;
    }

    if (*rep_cmd) {
      ExperimentConfig cfg = ExperimentConfig::from_file(rp_config);
      if (!rp_out_dir.empty()) {
        cfg.output_dir = rp_out_dir;
      } else {
        cfg.output_dir = out_dir_override(cfg.output_dir);
      }
      const RunReport rep = run_experiment(cfg);
      std::cout << (rep.all_gates_pass ? "PASS" : "FAIL") << " ("
                << rep.files.size() << " artifacts in "
                << cfg.output_dir.string() << ")\n";
      return rep.exit_code;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
