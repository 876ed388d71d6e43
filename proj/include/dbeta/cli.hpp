#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace dbeta::cli {

namespace fs = std::filesystem;

/// Invalid configuration; the message starts with the dotted field path.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(const std::string& path, const std::string& what);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Bad invocation or unusable inputs (exit 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

const std::vector<std::string>& subcommands();
std::string version_tag();

struct Check {
  std::string name;
  double value = 0.0;
  std::string op;  // "<=" or ">="
  double threshold = 0.0;
  bool pass = false;
};

struct RunRequest {
  std::string subcommand;
  /// Experiment config, or a manifest written by an earlier run.
  nlohmann::json config;
  fs::path out;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  /// Equilibrium overrides.
  std::optional<int> grid_n;
  std::optional<double> tol;
};

struct RunResult {
  int exit_code = kExitPass;
  std::vector<Check> checks;
  std::vector<std::string> messages;
  /// Error text for exit codes other than pass / check failure.
  std::string error;
  nlohmann::json manifest;
};

/// Validates, runs one subcommand, writes artifacts and manifest.json to
/// `out`. Never throws for bad input: schema and usage problems give exit 2,
/// failed checks and downstream errors exit 1.
RunResult run(const RunRequest& request);

/// Full command line entry point.
int main(int argc, char** argv);

}  // namespace dbeta::cli
