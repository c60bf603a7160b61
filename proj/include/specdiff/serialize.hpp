#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "specdiff/pos_def_sequence.hpp"
#include "specdiff/torus_measure.hpp"

namespace specdiff {

// shortest-exact decimal formatting; all numeric file output goes through
// this so reruns are byte-identical
std::string format_double(double v);

void write_text_file(const std::filesystem::path& path,
                     const std::string& content);

// lag,re,im,stderr (stderr column is 0 for exact paths)
std::string to_csv(const PosDefSequence& c);

// grid_index,density
std::string density_csv(const TorusMeasure& m);
// frequency,mass
std::string atoms_csv(const TorusMeasure& m);

nlohmann::json to_json(const PosDefSequence& c);
nlohmann::json to_json(const TorusMeasure& m);

PosDefSequence pos_def_from_json(const nlohmann::json& j);
TorusMeasure measure_from_json(const nlohmann::json& j);

// deterministic two-space-indent dump with trailing newline
std::string dump_json(const nlohmann::json& j);

}  // namespace specdiff
