#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "dbeta/ensemble.hpp"
#include "dbeta/equilibrium.hpp"
#include "dbeta/sampler.hpp"

namespace dbeta::io {

namespace fs = std::filesystem;

/// Shortest text that parses back to the same double; "inf", "-inf", "nan".
std::string format_double(double x);
double parse_double(const std::string& s);

/// Unbounded lattice ends are written as null.
nlohmann::json to_json(const EnsembleParams& params);
EnsembleParams params_from_json(const nlohmann::json& j);

/// {theta, aN, bN, lambdas}
nlohmann::json to_json(const Configuration& config);
Configuration configuration_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ChainSpec& spec);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;
  std::vector<double> numeric_column(const std::string& name) const;
};

/// Plain comma-separated text, no quoting. Throws on a missing file or a
/// ragged row.
CsvTable read_csv(const fs::path& path);
std::string csv_text(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

/// Writes through a sibling temporary and a rename, so readers never see a
/// partial file.
void write_file(const fs::path& path, const std::string& content);
nlohmann::json read_json(const fs::path& path);
void write_json(const fs::path& path, const nlohmann::json& j);

/// Columns lambda_vector (space separated), log_weight, probability.
std::string probability_csv(const ProbabilityTable& table);
void write_probability_csv(const fs::path& path, const ProbabilityTable& table);

/// ECDF table with columns x, F (one row per jump).
std::string ecdf_csv(const std::vector<double>& values);

std::string samples_csv(const SampleBatch& batch);
/// params, spec, weight, origin, n_samples, diagnostics.
nlohmann::json batch_manifest(const SampleBatch& batch);

/// Batch directory: manifest.json plus samples.csv with one λ row per
/// configuration. `extra` is merged into the manifest.
void save_batch(const fs::path& dir, const SampleBatch& batch, const nlohmann::json& extra = nlohmann::json::object());

struct LoadedBatch {
  SampleBatch batch;
  nlohmann::json manifest;
};
LoadedBatch load_batch(const fs::path& dir);

std::string measure_csv(const EquilibriumMeasure& measure);
nlohmann::json measure_sidecar(const EquilibriumMeasure& measure);
/// <stem>.csv with columns x, rho, FV and a <stem>.json sidecar.
void write_measure(const fs::path& dir, const std::string& stem, const EquilibriumMeasure& measure);

}  // namespace dbeta::io
