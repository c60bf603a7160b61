#include "specdiff/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace specdiff {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << content;
}

std::string to_csv(const PosDefSequence& c) {
  std::string out = "lag,re,im,stderr\n";
  const std::int64_t k = c.max_lag();
  const auto& se = c.stderrs();
  for (std::int64_t n = -k; n <= k; ++n) {
    const cplx v = c.at(n);
    const double s =
        se.empty() ? 0.0 : se[static_cast<std::size_t>(n + k)];
    out += std::to_string(n) + "," + format_double(v.real()) + "," +
           format_double(v.imag()) + "," + format_double(s) + "\n";
  }
  return out;
}

std::string density_csv(const TorusMeasure& m) {
  std::string out = "grid_index,density\n";
  const auto& d = m.density();
  for (std::size_t j = 0; j < d.size(); ++j) {
    out += std::to_string(j) + "," + format_double(d[j]) + "\n";
  }
  return out;
}

std::string atoms_csv(const TorusMeasure& m) {
  std::string out = "frequency,mass\n";
  for (const Atom& a : m.atoms()) {
    out += format_double(a.xi) + "," + format_double(a.mass) + "\n";
  }
  return out;
}

nlohmann::json to_json(const PosDefSequence& c) {
  nlohmann::json j;
  j["kind"] = "pos_def_sequence";
  j["max_lag"] = c.max_lag();
  j["provenance"] = c.provenance();
  nlohmann::json coeffs = nlohmann::json::array();
  const std::int64_t k = c.max_lag();
  const auto& se = c.stderrs();
  for (std::int64_t n = -k; n <= k; ++n) {
    const cplx v = c.at(n);
    nlohmann::json entry;
    entry["lag"] = n;
    entry["re"] = v.real();
    entry["im"] = v.imag();
    if (!se.empty()) entry["stderr"] = se[static_cast<std::size_t>(n + k)];
    coeffs.push_back(entry);
  }
  j["coefficients"] = coeffs;
  return j;
}

nlohmann::json to_json(const TorusMeasure& m) {
  nlohmann::json j;
  j["kind"] = "torus_measure";
  j["total_mass"] = m.total_mass();
  j["kernel_order"] = m.kernel_order();
  j["source_max_lag"] = m.source_max_lag();
  j["grid"] = m.grid();
  j["clipped_mass"] = m.clipped_mass();
  j["provenance"] = m.provenance();
  nlohmann::json atoms = nlohmann::json::array();
  for (const Atom& a : m.atoms()) {
    atoms.push_back({{"xi", a.xi}, {"mass", a.mass}});
  }
  j["atoms"] = atoms;
  j["density"] = m.density();
  return j;
}

PosDefSequence pos_def_from_json(const nlohmann::json& j) {
  if (j.value("kind", "") != "pos_def_sequence") {
    throw std::invalid_argument("not a pos_def_sequence document");
  }
  const std::int64_t k = j.at("max_lag").get<std::int64_t>();
  std::vector<cplx> full(static_cast<std::size_t>(2 * k + 1));
  std::vector<double> se;
  for (const auto& entry : j.at("coefficients")) {
    const std::int64_t n = entry.at("lag").get<std::int64_t>();
    full[static_cast<std::size_t>(n + k)] =
        cplx{entry.at("re").get<double>(), entry.at("im").get<double>()};
    if (entry.contains("stderr")) {
      se.resize(full.size());
      se[static_cast<std::size_t>(n + k)] = entry.at("stderr").get<double>();
    }
  }
  return PosDefSequence(std::move(full), 1e-6, j.value("provenance", ""),
                        std::move(se));
}

TorusMeasure measure_from_json(const nlohmann::json& j) {
  if (j.value("kind", "") != "torus_measure") {
    throw std::invalid_argument("not a torus_measure document");
  }
  std::vector<Atom> atoms;
  for (const auto& a : j.at("atoms")) {
    atoms.push_back(
        Atom{a.at("xi").get<double>(), a.at("mass").get<double>()});
  }
  return TorusMeasure(std::move(atoms),
                      j.at("density").get<std::vector<double>>(),
                      j.at("kernel_order").get<std::int64_t>(),
                      j.at("source_max_lag").get<std::int64_t>(),
                      j.at("total_mass").get<double>(),
                      j.value("clipped_mass", 0.0), j.value("provenance", ""));
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace specdiff
