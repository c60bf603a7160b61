#pragma once

#include <json.hpp>

#include "specdiff/config.hpp"

namespace specdiff {

struct RunReport {
  nlohmann::json document;
  bool all_gates_pass = true;
  int exit_code = 0;  // 0 pass, 1 gate failure

  // files written, relative to the output dir
  std::vector<std::string> files;
};

// Full pipeline for one experiment config: per observable, both estimation
// routes, diffraction measures, identity residuals, optional mean-AP
// classification, gate evaluation, artifact persistence. Deterministic for
// a fixed (config, seed): rerunning produces byte-identical CSV/JSON files
// (timings go to a plain-text log, not into the artifacts).
RunReport run_experiment(const ExperimentConfig& cfg);

nlohmann::json classify_report_to_json(const ClassifyReport& report);

}  // namespace specdiff
