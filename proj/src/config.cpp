#include "specdiff/config.hpp"

#include <fstream>

namespace specdiff {

namespace {

std::vector<char> letters_from_json(const nlohmann::json& j) {
  std::vector<char> out;
  if (j.is_string()) {
    for (char c : j.get<std::string>()) out.push_back(c);
  } else {
    for (const auto& item : j) {
      const std::string s = item.get<std::string>();
      if (s.size() != 1) {
        throw ConfigError("letters must be single characters");
      }
      out.push_back(s[0]);
    }
  }
  return out;
}

}  // namespace

SystemSpec system_from_json(const nlohmann::json& j) {
  try {
    if (j.is_string()) return SystemSpec::built_in(j.get<std::string>());
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "builtin") {
      return SystemSpec::built_in(j.at("name").get<std::string>());
    }
    if (kind == "cyclic") {
      std::vector<double> weights;
      if (j.contains("weights")) {
        weights = j.at("weights").get<std::vector<double>>();
      }
      return SystemSpec::finite_cyclic(j.at("size").get<std::int64_t>(),
                                       j.value("step", std::int64_t{1}),
                                       std::move(weights));
    }
    if (kind == "rotation") {
      if (!j.contains("alpha")) return SystemSpec::golden_rotation();
      return SystemSpec::rotation(j.at("alpha").get<double>());
    }
    if (kind == "bernoulli") {
      return SystemSpec::bernoulli(letters_from_json(j.at("letters")),
                                   j.at("probs").get<std::vector<double>>());
    }
    if (kind == "substitution") {
      if (j.contains("name")) {
        return SystemSpec::built_in(j.at("name").get<std::string>());
      }
      std::vector<std::pair<char, std::string>> rules;
      for (const auto& [letter, image] : j.at("rules").items()) {
        if (letter.size() != 1) {
          throw ConfigError("substitution letters must be single characters");
        }
        rules.emplace_back(letter[0], image.get<std::string>());
      }
      return SystemSpec::substitution(SubstitutionRule::from_strings(rules),
                                      j.value("label", "substitution"));
    }
    if (kind == "explicit") {
      const auto letters = letters_from_json(j.at("letters"));
      std::vector<Symbol> period;
      for (char c : j.at("word").get<std::string>()) {
        bool found = false;
        for (std::size_t i = 0; i < letters.size(); ++i) {
          if (letters[i] == c) {
            period.push_back(static_cast<Symbol>(i));
            found = true;
            break;
          }
        }
        if (!found) throw ConfigError("explicit word uses unknown letter");
      }
      return SystemSpec::explicit_periodic(letters, std::move(period));
    }
    throw ConfigError("unknown system kind: " + kind);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("system config: ") + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("system config: ") + e.what());
  }
}

Observable observable_from_json(const SystemSpec& spec,
                                const nlohmann::json& j) {
  try {
    if (j.is_string()) return Observable::parse(spec, j.get<std::string>());
    const std::string kind = j.at("kind").get<std::string>();
    const std::string name = j.value("name", kind);
    if (kind == "letter_weights") {
      std::vector<cplx> w;
      for (const auto& item : j.at("weights")) {
        if (item.is_array()) {
          w.emplace_back(item.at(0).get<double>(), item.at(1).get<double>());
        } else {
          w.emplace_back(item.get<double>(), 0.0);
        }
      }
      return Observable::letter_weights(spec, std::move(w),
                                        j.value("centered", false), name);
    }
    if (kind == "cylinder") {
      std::vector<Symbol> pattern;
      for (char c : j.at("pattern").get<std::string>()) {
        const int idx = spec.symbol_index(c);
        if (idx < 0) throw ConfigError("cylinder pattern: unknown letter");
        pattern.push_back(static_cast<Symbol>(idx));
      }
      return Observable::cylinder(spec, std::move(pattern),
                                  j.value("anchor", std::int64_t{0}), name);
    }
    if (kind == "character") {
      return Observable::character(spec, j.value("k", std::int64_t{-1}));
    }
    throw ConfigError("unknown observable kind: " + kind);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("observable config: ") + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("observable config: ") + e.what());
  }
}

TestFunction test_function_from_json(const nlohmann::json& j) {
  try {
    const std::int64_t offset = j.value("offset", std::int64_t{0});
    std::vector<cplx> coeffs;
    for (const auto& item : j.at("coeffs")) {
      if (item.is_array()) {
        coeffs.emplace_back(item.at(0).get<double>(),
                            item.at(1).get<double>());
      } else {
        coeffs.emplace_back(item.get<double>(), 0.0);
      }
    }
    return TestFunction(offset, std::move(coeffs));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("test function config: ") + e.what());
  }
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  try {
    if (!j.contains("seed")) {
      throw ConfigError("config: a seed is mandatory (no entropy defaults)");
    }
    ExperimentConfig cfg{
        .seed = j.at("seed").get<std::uint64_t>(),
        .output_dir = {},
        .system = system_from_json(j.at("system")),
        .observables = {},
        .estimator = {},
        .diffraction = {},
        .mean_ap = std::nullopt,
        .mean_ap_trials = 2,
        .factor_phis = {},
        .gates = {},
        .raw = j,
    };
    cfg.output_dir = j.value("output_dir", std::string{"out"});

    if (!j.contains("observables") || j.at("observables").empty()) {
      throw ConfigError("config: at least one observable is required");
    }
    for (const auto& o : j.at("observables")) {
      cfg.observables.push_back(observable_from_json(cfg.system, o));
    }

    if (j.contains("estimator")) {
      const auto& e = j.at("estimator");
      cfg.estimator.max_lag = e.value("max_lag", cfg.estimator.max_lag);
      cfg.estimator.orbit_length =
          e.value("orbit_length", cfg.estimator.orbit_length);
      cfg.estimator.mc_samples =
          e.value("mc_samples", cfg.estimator.mc_samples);
      cfg.estimator.tol_stat = e.value("tol_stat", cfg.estimator.tol_stat);
    }
    cfg.estimator.seed = cfg.seed;
    try {
      cfg.estimator.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("estimator config: ") + e.what());
    }

    if (j.contains("diffraction")) {
      const auto& d = j.at("diffraction");
      cfg.diffraction.grid = d.value("grid", cfg.diffraction.grid);
      cfg.diffraction.kernel_order =
          d.value("kernel_order", cfg.diffraction.kernel_order);
      cfg.diffraction.atom_threshold_rel =
          d.value("atom_threshold_rel", cfg.diffraction.atom_threshold_rel);
      cfg.diffraction.scan_grid =
          d.value("scan_grid", cfg.diffraction.scan_grid);
    }
    if (cfg.diffraction.kernel_order > cfg.estimator.max_lag) {
      throw ConfigError("config: kernel_order must not exceed max_lag");
    }
    try {
      cfg.diffraction.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("diffraction config: ") + e.what());
    }

    if (j.contains("mean_ap")) {
      const auto& m = j.at("mean_ap");
      MeanApParams p;
      p.horizon = m.value("horizon", p.horizon);
      p.t_max = m.value("t_max", p.t_max);
      if (m.contains("eps")) {
        p.eps_grid = m.at("eps").get<std::vector<double>>();
      }
      if (m.contains("k_max")) {
        p.k_max_override = m.at("k_max").get<std::int64_t>();
      }
      try {
        p.validate();
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("mean_ap config: ") + e.what());
      }
      cfg.mean_ap = p;
      cfg.mean_ap_trials = m.value("trials", std::int64_t{2});
    }

    if (j.contains("factor_phis")) {
      for (const auto& p : j.at("factor_phis")) {
        cfg.factor_phis.push_back(test_function_from_json(p));
      }
    } else {
      cfg.factor_phis.push_back(TestFunction::delta(0));
      cfg.factor_phis.push_back(
          TestFunction(0, {cplx{1.0, 0.0}, cplx{1.0, 0.0}}));
    }

    if (j.contains("gates")) {
      const auto& g = j.at("gates");
      cfg.gates.two_estimator_sup =
          g.value("two_estimator_sup", cfg.gates.two_estimator_sup);
      if (g.contains("pp_energy_max")) {
        cfg.gates.pp_energy_max = g.at("pp_energy_max").get<double>();
      }
      if (g.contains("pp_energy_min")) {
        cfg.gates.pp_energy_min = g.at("pp_energy_min").get<double>();
      }
      cfg.gates.pp_energy_route =
          g.value("pp_energy_route", cfg.gates.pp_energy_route);
      if (g.contains("atoms")) {
        for (const auto& a : g.at("atoms")) {
          AtomGate gate;
          gate.xi = a.at("xi").get<double>();
          gate.xi_tol = a.value("xi_tol", gate.xi_tol);
          gate.mass_min = a.value("mass_min", gate.mass_min);
          gate.mass_max = a.value("mass_max", gate.mass_max);
          gate.route = a.value("route", gate.route);
          cfg.gates.atoms.push_back(gate);
        }
      }
      if (g.contains("forbid_atoms_route")) {
        cfg.gates.forbid_atoms_route =
            g.at("forbid_atoms_route").get<std::string>();
      }
      if (g.contains("verdicts")) {
        for (const auto& [name, v] : g.at("verdicts").items()) {
          cfg.gates.verdicts[name] = v.get<std::string>();
        }
      }
    }
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

ExperimentConfig ExperimentConfig::from_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config parse: ") + e.what());
  }
  return from_json(j);
}

}  // namespace specdiff
