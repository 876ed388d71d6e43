#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dbeta/cli.hpp"
#include "dbeta/ensemble.hpp"
#include "dbeta/equilibrium.hpp"
#include "dbeta/io.hpp"
#include "dbeta/sampler.hpp"
#include "dbeta/weights.hpp"

namespace dbeta::cli {

using nlohmann::json;

/// Reads one JSON object and records every value it hands out (defaults
/// included) into a resolved copy.
class Node {
 public:
  Node(const json& in, json& out, std::string path);

  const std::string& path() const { return path_; }
  std::string path_of(const std::string& key) const;
  bool has(const std::string& key) const;
  [[noreturn]] void fail(const std::string& key, const std::string& what) const;

  template <class T>
  T get(const std::string& key) const {
    if (!has(key)) fail(key, "missing required field");
    return convert<T>(key);
  }
  template <class T>
  T get(const std::string& key, T fallback) const {
    if (!has(key)) {
      (*out_)[key] = fallback;
      return fallback;
    }
    return convert<T>(key);
  }
  double positive(const std::string& key) const;
  double positive(const std::string& key, double fallback) const;
  long at_least(const std::string& key, long min) const;
  long at_least(const std::string& key, long min, long fallback) const;
  std::string choice(const std::string& key, const std::vector<std::string>& options,
                     std::optional<std::string> fallback = std::nullopt) const;
  /// Raw JSON value, copied into the resolved config.
  const json& raw(const std::string& key) const;

  /// Overwrites a value (command-line overrides) in the resolved copy.
  void set(const std::string& key, const json& value) const { (*out_)[key] = value; }
  const json& resolved() const { return *out_; }

  Node object(const std::string& key) const;
  /// Like object(), but an absent key reads as {} so every field defaults.
  Node section(const std::string& key) const;
  std::optional<Node> maybe_object(const std::string& key) const;

 private:
  template <class T>
  T convert(const std::string& key) const {
    const json& v = in_->at(key);
    try {
      T value = v.get<T>();
      (*out_)[key] = v;
      return value;
    } catch (const json::exception&) {
      fail(key, "expected " + type_name<T>() + ", got " + std::string(v.type_name()));
    }
  }
  template <class T>
  static std::string type_name() {
    if constexpr (std::is_same_v<T, bool>) return "boolean";
    else if constexpr (std::is_integral_v<T>) return "integer";
    else if constexpr (std::is_floating_point_v<T>) return "number";
    else if constexpr (std::is_same_v<T, std::string>) return "string";
    else return "array";
  }

  const json* in_;
  json* out_;
  std::string path_;
};

/// Throws SchemaError for keys of `in` that were never read into `resolved`.
void reject_unknown(const json& in, const json& resolved, const std::string& path);

struct Context {
  std::string subcommand;
  /// Staging directory; artifacts move to `target` only after success.
  fs::path out;
  fs::path target;
  std::uint64_t seed = 1;
  int workers = 1;
  std::optional<int> grid_n;
  std::optional<double> tol;
  std::vector<Check> checks;
  std::vector<std::string> messages;
  std::vector<std::string> artifacts;
  json manifest_extra = json::object();

  void write(const std::string& name, const std::string& content);
  void write_json(const std::string& name, const json& j);
  /// Records a check named after its config key.
  void check(const std::string& name, double value, const std::string& op, double threshold);
};

// Model construction from config nodes.
WeightModel parse_weight(const Node& node, int n_particles, double theta);
EnsembleParams parse_ensemble(const Node& node, const Node& weight_node);
/// Resolved weight config of a batch written by `sample` or `jack`.
json batch_weight_config(const json& manifest);
WeightModel weight_from_config(const json& weight_config, const EnsembleParams& params);
/// Equilibrium measure of ℓ/N for the batch's weight at its N.
EquilibriumMeasure equilibrium_for(const WeightModel& weight, const EnsembleParams& params, int grid_n = 2000);
/// Reads a batch directory named in the config; refuses the output directory.
io::LoadedBatch load_input_batch(const Node& node, const std::string& key, const Context& ctx);

using Handler = std::function<void(const Node&, Context&)>;
const std::map<std::string, Handler>& handlers();

void cmd_sample(const Node& p, Context& ctx);
void cmd_equilibrium(const Node& p, Context& ctx);
void cmd_nekrasov(const Node& p, Context& ctx);
void cmd_duality(const Node& p, Context& ctx);
void cmd_rigidity(const Node& p, Context& ctx);
void cmd_edge(const Node& p, Context& ctx);
void cmd_gaps(const Node& p, Context& ctx);
void cmd_gbe(const Node& p, Context& ctx);
void cmd_jack(const Node& p, Context& ctx);
void cmd_compare(const Node& p, Context& ctx);
void cmd_render(const Node& p, Context& ctx);

}  // namespace dbeta::cli
