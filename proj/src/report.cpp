#include "specdiff/report.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <string>

#include "specdiff/factors.hpp"
#include "specdiff/rng.hpp"
#include "specdiff/serialize.hpp"

namespace specdiff {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string sanitize(const std::string& name) {
  std::string out;
  for (char c : name) {
    out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  }
  return out;
}

nlohmann::json atoms_to_json(const std::vector<Atom>& atoms) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Atom& a : atoms) {
    arr.push_back({{"xi", a.xi}, {"mass", a.mass}});
  }
  return arr;
}

struct GateOutcome {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool pass = true;
};

nlohmann::json gates_to_json(const std::vector<GateOutcome>& gates) {
  nlohmann::json arr = nlohmann::json::array();
  for (const GateOutcome& g : gates) {
    arr.push_back({{"name", g.name},
                   {"value", g.value},
                   {"bound", g.bound},
                   {"pass", g.pass}});
  }
  return arr;
}

}  // namespace

nlohmann::json classify_report_to_json(const ClassifyReport& report) {
  nlohmann::json j;
  j["system"] = report.system;
  j["trials"] = report.trials;
  j["overall"] = verdict_name(report.overall);
  nlohmann::json verdicts = nlohmann::json::array();
  for (const ObservableVerdict& ov : report.verdicts) {
    nlohmann::json v;
    v["observable"] = ov.observable;
    v["verdict"] = verdict_name(ov.verdict);
    v["horizons_agree"] = ov.horizons_agree;
    if (ov.verdict == Verdict::kNotMeanAp) {
      v["witness_eps"] = ov.witness_eps;
      v["witness_gap"] = ov.witness_gap;
    }
    nlohmann::json details = nlohmann::json::array();
    for (const EpsVerdict& ev : ov.details) {
      details.push_back({{"eps", ev.eps},
                         {"k_max", ev.k_max},
                         {"smallest_period", ev.smallest_period_full},
                         {"gap_full", ev.gap_full},
                         {"gap_half", ev.gap_half},
                         {"dense_full", ev.dense_full},
                         {"dense_half", ev.dense_half}});
    }
    v["details"] = details;
    verdicts.push_back(v);
  }
  j["verdicts"] = verdicts;
  return j;
}

RunReport run_experiment(const ExperimentConfig& cfg) {
  RunReport out;
  nlohmann::json& doc = out.document;
  // the echo carries the experiment-defining fields; the output directory is
  // run environment and must not leak into byte-compared artifacts
  nlohmann::json echo = cfg.raw;
  echo.erase("output_dir");
  doc["config"] = echo;
  doc["observables"] = nlohmann::json::array();

  std::string timings;
  const Clock::time_point run_start = Clock::now();

  for (const Observable& f : cfg.observables) {
    const Clock::time_point t0 = Clock::now();
    const std::string label = sanitize(cfg.system.name() + "_" + f.name());
    std::vector<GateOutcome> gates;

    const SpectrumReport rep = spectrum_report(
        cfg.system, f, cfg.estimator, cfg.diffraction, cfg.output_dir, label);
    for (const std::string& file : rep.files) out.files.push_back(file);

    // identity residuals: the defining identity on the spectral-side window,
    // the factor autocorrelation against an independent direct estimate, and
    // the transfer identity per configured test function
    EstimatorParams ident_params = cfg.estimator;
    ident_params.seed = derive_seed(cfg.seed, "identity");
    PosDefSequence c_ident =
        cfg.system.is_finite_cyclic()
            ? exact_coefficients_finite(cfg.system, f, cfg.estimator.max_lag)
            : spectral_coefficients_mc(cfg.system, f, ident_params);
    const double ident = nmap_identity_residual(
        c_ident, TestFunction::delta(0), TestFunction::delta(1), cfg.system, f,
        ident_params);

    EstimatorParams factor_params = cfg.estimator;
    factor_params.seed = derive_seed(cfg.seed, "factor");
    const PosDefSequence c_factor =
        factor_autocorrelation(cfg.system, f, factor_params);
    PosDefSequence c_direct = [&] {
      if (cfg.system.is_finite_cyclic()) {
        return exact_coefficients_finite(cfg.system, f, cfg.estimator.max_lag);
      }
      const std::int64_t extent =
          std::max(std::llabs(f.coord_min()), std::llabs(f.coord_max()));
      const State x = sample_invariant(
          cfg.system, derive_seed(cfg.seed, "factor-direct-state"),
          cfg.estimator.orbit_length + extent + 1);
      return empirical_autocorrelation(
          orbit_samples(cfg.system, f, x, cfg.estimator.orbit_length),
          cfg.estimator.max_lag);
    }();
    double factor_sup = 0.0;
    for (std::int64_t n = -cfg.estimator.max_lag; n <= cfg.estimator.max_lag;
         ++n) {
      factor_sup = std::max(factor_sup, std::abs(c_factor.at(n) - c_direct.at(n)));
    }

    EstimatorParams transfer_params = cfg.estimator;
    transfer_params.seed = derive_seed(cfg.seed, "transfer");
    nlohmann::json transfer_residuals = nlohmann::json::array();
    for (const TestFunction& phi : cfg.factor_phis) {
      transfer_residuals.push_back(
          factor_transfer_residual(cfg.system, f, phi, transfer_params));
    }

    // gates
    gates.push_back(GateOutcome{
        "two_estimator_sup", rep.two_estimator_sup, cfg.gates.two_estimator_sup,
        rep.two_estimator_sup <= cfg.gates.two_estimator_sup});
    const double pp = cfg.gates.pp_energy_route == "mc" ? rep.pp_energy_mc
                                                        : rep.pp_energy_orbit;
    if (cfg.gates.pp_energy_max) {
      gates.push_back(GateOutcome{"pp_energy_max", pp,
                                  *cfg.gates.pp_energy_max,
                                  pp <= *cfg.gates.pp_energy_max});
    }
    if (cfg.gates.pp_energy_min) {
      gates.push_back(GateOutcome{"pp_energy_min", pp,
                                  *cfg.gates.pp_energy_min,
                                  pp >= *cfg.gates.pp_energy_min});
    }
    for (const AtomGate& ag : cfg.gates.atoms) {
      const auto& atoms = ag.route == "orbit" ? rep.atoms_orbit : rep.atoms_mc;
      bool matched = false;
      double best_mass = 0.0;
      for (const Atom& a : atoms) {
        const double d = std::min(std::abs(a.xi - ag.xi),
                                  1.0 - std::abs(a.xi - ag.xi));
        if (d <= ag.xi_tol && a.mass >= ag.mass_min && a.mass <= ag.mass_max) {
          matched = true;
          best_mass = a.mass;
          break;
        }
      }
      gates.push_back(GateOutcome{"atom@" + format_double(ag.xi), best_mass,
                                  ag.mass_min, matched});
    }
    if (cfg.gates.forbid_atoms_route) {
      const auto& atoms = *cfg.gates.forbid_atoms_route == "orbit"
                              ? rep.atoms_orbit
                              : rep.atoms_mc;
      gates.push_back(GateOutcome{"no_atoms",
                                  static_cast<double>(atoms.size()), 0.0,
                                  atoms.empty()});
    }

    nlohmann::json oj;
    oj["name"] = f.name();
    oj["files"] = rep.files;
    oj["orbit_c0"] = rep.orbit_c0;
    oj["mc_c0"] = rep.mc_c0;
    oj["two_estimator_sup"] = rep.two_estimator_sup;
    oj["measure_distance"] = {{"coeff_sup", rep.distance.coeff_sup},
                              {"cdf_sup", rep.distance.cdf_sup}};
    oj["pp_energy_orbit"] = rep.pp_energy_orbit;
    oj["pp_energy_mc"] = rep.pp_energy_mc;
    oj["atoms_orbit"] = atoms_to_json(rep.atoms_orbit);
    oj["atoms_mc"] = atoms_to_json(rep.atoms_mc);
    oj["conservation_gap_orbit"] = rep.conservation_gap_orbit;
    oj["conservation_gap_mc"] = rep.conservation_gap_mc;
    oj["identity_residuals"] = {{"nmap_identity", ident},
                                {"factor_sup", factor_sup},
                                {"factor_transfer", transfer_residuals}};
    oj["gates"] = gates_to_json(gates);
    doc["observables"].push_back(oj);

    for (const GateOutcome& g : gates) {
      if (!g.pass) out.all_gates_pass = false;
    }
    timings += label + " " + format_double(seconds_since(t0)) + " s\n";
  }

  if (cfg.mean_ap) {
    const Clock::time_point t0 = Clock::now();
    const ClassifyReport cls = classify_discrete_spectrum(
        cfg.system, cfg.observables, *cfg.mean_ap, cfg.mean_ap_trials,
        derive_seed(cfg.seed, "classify"));
    doc["classify"] = classify_report_to_json(cls);
    write_text_file(cfg.output_dir / "verdict.json",
                    dump_json(doc["classify"]));
    out.files.push_back("verdict.json");
    for (const ObservableVerdict& ov : cls.verdicts) {
      auto it = cfg.gates.verdicts.find(ov.observable);
      if (it != cfg.gates.verdicts.end()) {
        const bool pass = verdict_name(ov.verdict) == it->second;
        if (!pass) out.all_gates_pass = false;
        doc["classify_gates"].push_back(
            {{"observable", ov.observable},
             {"expected", it->second},
             {"actual", verdict_name(ov.verdict)},
             {"pass", pass}});
      }
    }
    timings += "classify " + format_double(seconds_since(t0)) + " s\n";
  }

  doc["all_gates_pass"] = out.all_gates_pass;
  out.exit_code = out.all_gates_pass ? 0 : 1;

  write_text_file(cfg.output_dir / "report.json", dump_json(doc));
  out.files.push_back("report.json");
  timings += "total " + format_double(seconds_since(run_start)) + " s\n";
  // timings are wall-clock and non-deterministic; they live outside the
  // CSV/JSON artifacts so reruns stay byte-identical
  write_text_file(cfg.output_dir / "timings.log", timings);
  return out;
}

}  // namespace specdiff
