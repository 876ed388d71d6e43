#include "dbeta/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "dbeta/stats.hpp"

namespace dbeta::io {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

double parse_double(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  double x = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw std::runtime_error("not a number: '" + s + "'");
  return x;
}

namespace {

nlohmann::json bound_json(double v) { return std::isinf(v) ? nlohmann::json(nullptr) : nlohmann::json(v); }

double bound_from(const nlohmann::json& j, const char* key, double fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  return j.at(key).get<double>();
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

nlohmann::json to_json(const EnsembleParams& p) {
  return {{"theta", p.theta}, {"n", p.n_particles}, {"aN", bound_json(p.a_lattice)}, {"bN", bound_json(p.b_lattice)}};
}

EnsembleParams params_from_json(const nlohmann::json& j) {
  EnsembleParams p;
  p.theta = j.at("theta").get<double>();
  p.n_particles = j.at("n").get<int>();
  p.a_lattice = bound_from(j, "aN", -std::numeric_limits<double>::infinity());
  p.b_lattice = bound_from(j, "bN", std::numeric_limits<double>::infinity());
  p.validate();
  return p;
}

nlohmann::json to_json(const Configuration& c) {
  const auto& p = c.params();
  return {{"theta", p.theta}, {"aN", bound_json(p.a_lattice)}, {"bN", bound_json(p.b_lattice)}, {"lambdas", c.lambdas()}};
}

Configuration configuration_from_json(const nlohmann::json& j) {
  EnsembleParams p;
  p.theta = j.at("theta").get<double>();
  const auto lambdas = j.at("lambdas").get<Lambdas>();
  p.n_particles = static_cast<int>(lambdas.size());
  p.a_lattice = bound_from(j, "aN", -std::numeric_limits<double>::infinity());
  p.b_lattice = bound_from(j, "bN", std::numeric_limits<double>::infinity());
  p.validate();
  return Configuration(p, lambdas);
}

nlohmann::json to_json(const ChainSpec& s) {
  nlohmann::json init;
  if (std::holds_alternative<UniformSpread>(s.init)) {
    init = "uniform-spread";
  } else if (std::holds_alternative<EquilibriumQuantiles>(s.init)) {
    init = "equilibrium-quantile";
  } else {
    init = {{"lambdas", std::get<Configuration>(s.init).lambdas()}};
  }
  return {{"steps", s.steps}, {"burn_in", s.burn_in}, {"thin", s.thin}, {"seed", s.seed}, {"init", init}};
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw std::runtime_error("CSV has no column '" + name + "'");
}

std::vector<double> CsvTable::numeric_column(const std::string& name) const {
  const std::size_t c = column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(parse_double(r[c]));
  return out;
}

CsvTable read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing CSV: " + path.string());
  CsvTable t;
  std::string line;
  if (!std::getline(in, line) || line.empty()) throw std::runtime_error("empty CSV: " + path.string());
  t.header = split(line, ',');
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto cells = split(line, ',');
    if (cells.size() != t.header.size()) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": expected " +
                               std::to_string(t.header.size()) + " cells");
    }
    t.rows.push_back(std::move(cells));
  }
  return t;
}

std::string csv_text(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
  out += '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out += ',';
      out += format_double(r[i]);
    }
    out += '\n';
  }
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path.string());
  }
  fs::rename(tmp, path);
}

nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

void write_json(const fs::path& path, const nlohmann::json& j) { write_file(path, j.dump(2) + "\n"); }

std::string probability_csv(const ProbabilityTable& table) {
  std::string out = "lambda_vector,log_weight,probability\n";
  for (std::size_t k = 0; k < table.configurations.size(); ++k) {
    const auto& lam = table.configurations[k].lambdas();
    for (std::size_t i = 0; i < lam.size(); ++i) out += (i ? " " : "") + std::to_string(lam[i]);
    out += ',' + format_double(table.log_weights[k]) + ',' + format_double(table.probabilities[k]) + '\n';
  }
  return out;
}

void write_probability_csv(const fs::path& path, const ProbabilityTable& table) {
  write_file(path, probability_csv(table));
}

std::string ecdf_csv(const std::vector<double>& values) {
  const Ecdf f(values);
  std::vector<std::vector<double>> rows;
  for (const auto& [x, F] : f.steps()) rows.push_back({x, F});
  return csv_text({"x", "F"}, rows);
}

std::string samples_csv(const SampleBatch& batch) {
  const int n = batch.params.n_particles;
  std::string csv;
  for (int i = 1; i <= n; ++i) csv += (i > 1 ? ",lambda_" : "lambda_") + std::to_string(i);
  csv += '\n';
  for (const auto& c : batch.configurations) {
    const auto& lam = c.lambdas();
    for (std::size_t i = 0; i < lam.size(); ++i) csv += (i ? "," : "") + std::to_string(lam[i]);
    csv += '\n';
  }
  return csv;
}

nlohmann::json batch_manifest(const SampleBatch& batch) {
  return {{"params", to_json(batch.params)},
          {"spec", to_json(batch.spec)},
          {"weight", batch.weight_descriptor},
          {"origin", batch.origin},
          {"n_samples", batch.configurations.size()},
          {"diagnostics",
           {{"acceptance_rate", batch.acceptance_rate}, {"autocorrelation_time", batch.autocorrelation_time}}}};
}

void save_batch(const fs::path& dir, const SampleBatch& batch, const nlohmann::json& extra) {
  nlohmann::json m = extra;
  m.update(batch_manifest(batch));
  write_file(dir / "samples.csv", samples_csv(batch));
  write_json(dir / "manifest.json", m);
}

LoadedBatch load_batch(const fs::path& dir) {
  LoadedBatch out;
  out.manifest = read_json(dir / "manifest.json");
  const auto& m = out.manifest;
  SampleBatch& b = out.batch;
  try {
    b.params = params_from_json(m.at("params"));
    b.weight_descriptor = m.value("weight", nlohmann::json::object());
    b.origin = m.value("origin", std::string("mcmc"));
    const auto& d = m.at("diagnostics");
    b.acceptance_rate = d.at("acceptance_rate").get<double>();
    b.autocorrelation_time = d.at("autocorrelation_time").get<double>();
    const auto& s = m.at("spec");
    b.spec.steps = s.at("steps").get<long>();
    b.spec.burn_in = s.at("burn_in").get<long>();
    b.spec.thin = s.at("thin").get<long>();
    b.spec.seed = s.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error((dir / "manifest.json").string() + ": " + e.what());
  }
  const CsvTable t = read_csv(dir / "samples.csv");
  if (static_cast<int>(t.header.size()) != b.params.n_particles) {
    throw std::runtime_error((dir / "samples.csv").string() + ": column count does not match params.n");
  }
  b.configurations.reserve(t.rows.size());
  for (const auto& r : t.rows) {
    Lambdas lam;
    lam.reserve(r.size());
    for (const auto& cell : r) lam.push_back(std::stol(cell));
    b.configurations.emplace_back(b.params, std::move(lam));
  }
  return out;
}

std::string measure_csv(const EquilibriumMeasure& m) {
  std::vector<std::vector<double>> rows;
  const bool fv = m.FV.size() == m.grid.size();
  for (int i = 0; i < m.size(); ++i) {
    rows.push_back({m.grid[i], m.density[i], fv ? m.FV[i] : std::numeric_limits<double>::quiet_NaN()});
  }
  return csv_text({"x", "rho", "FV"}, rows);
}

nlohmann::json measure_sidecar(const EquilibriumMeasure& m) {
  nlohmann::json regions = nlohmann::json::array();
  for (const auto& r : m.regions) regions.push_back({{"kind", to_string(r.kind)}, {"lo", r.lo}, {"hi", r.hi}});
  return {{"A", m.A},
          {"B", m.B},
          {"f_V", m.f_V},
          {"theta", m.theta},
          {"lo", m.lo},
          {"hi", m.hi},
          {"grid_n", m.size()},
          {"kkt_residual", m.kkt_residual},
          {"iterations", m.iterations},
          {"regions", regions}};
}

void write_measure(const fs::path& dir, const std::string& stem, const EquilibriumMeasure& m) {
  write_file(dir / (stem + ".csv"), measure_csv(m));
  write_json(dir / (stem + ".json"), measure_sidecar(m));
}

}  // namespace dbeta::io
