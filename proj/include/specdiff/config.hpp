#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "specdiff/diffraction.hpp"
#include "specdiff/estimators.hpp"
#include "specdiff/mean_ap.hpp"
#include "specdiff/systems.hpp"

namespace specdiff {

// schema violations exit with code 2; tolerance-gate failures with code 1
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct AtomGate {
  double xi = 0.0;
  double xi_tol = 1e-3;
  double mass_min = 0.0;
  double mass_max = std::numeric_limits<double>::infinity();
  std::string route = "mc";  // "mc" | "orbit"
};

struct Gates {
  double two_estimator_sup = 0.05;
  std::optional<double> pp_energy_max;
  std::optional<double> pp_energy_min;
  std::string pp_energy_route = "orbit";
  std::vector<AtomGate> atoms;
  std::optional<std::string> forbid_atoms_route;  // no atoms on this route
  std::map<std::string, std::string> verdicts;    // observable -> expected
};

struct ExperimentConfig {
  std::uint64_t seed = 0;
  std::filesystem::path output_dir;
  SystemSpec system;
  std::vector<Observable> observables;
  EstimatorParams estimator;
  DiffractionParams diffraction;
  std::optional<MeanApParams> mean_ap;
  std::int64_t mean_ap_trials = 2;
  std::vector<TestFunction> factor_phis;  // test functions for factor checks
  Gates gates;
  nlohmann::json raw;  // config echo for the report

  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig from_file(const std::filesystem::path& path);
};

SystemSpec system_from_json(const nlohmann::json& j);
Observable observable_from_json(const SystemSpec& spec,
                                const nlohmann::json& j);
TestFunction test_function_from_json(const nlohmann::json& j);

}  // namespace specdiff
