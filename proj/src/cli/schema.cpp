#include <algorithm>

#include "internal.hpp"

namespace dbeta::cli {

SchemaError::SchemaError(const std::string& path, const std::string& what)
    : std::runtime_error(path + ": " + what), path_(path) {}

Node::Node(const json& in, json& out, std::string path) : in_(&in), out_(&out), path_(std::move(path)) {
  if (!in.is_object()) throw SchemaError(path_.empty() ? "<root>" : path_, "expected object");
  if (!out.is_object()) out = json::object();
}

std::string Node::path_of(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

bool Node::has(const std::string& key) const { return in_->contains(key) && !in_->at(key).is_null(); }

void Node::fail(const std::string& key, const std::string& what) const { throw SchemaError(path_of(key), what); }

double Node::positive(const std::string& key) const {
  const double v = get<double>(key);
  if (!(v > 0.0)) fail(key, "must be positive");
  return v;
}

double Node::positive(const std::string& key, double fallback) const {
  const double v = get<double>(key, fallback);
  if (!(v > 0.0)) fail(key, "must be positive");
  return v;
}

long Node::at_least(const std::string& key, long min) const {
  const long v = get<long>(key);
  if (v < min) fail(key, "must be at least " + std::to_string(min));
  return v;
}

long Node::at_least(const std::string& key, long min, long fallback) const {
  const long v = get<long>(key, fallback);
  if (v < min) fail(key, "must be at least " + std::to_string(min));
  return v;
}

std::string Node::choice(const std::string& key, const std::vector<std::string>& options,
                         std::optional<std::string> fallback) const {
  const std::string v = fallback ? get<std::string>(key, *fallback) : get<std::string>(key);
  if (std::find(options.begin(), options.end(), v) == options.end()) {
    std::string list;
    for (const auto& o : options) list += (list.empty() ? "" : ", ") + o;
    fail(key, "'" + v + "' is not one of " + list);
  }
  return v;
}

const json& Node::raw(const std::string& key) const {
  if (!has(key)) fail(key, "missing required field");
  (*out_)[key] = in_->at(key);
  return in_->at(key);
}

Node Node::object(const std::string& key) const {
  if (!has(key)) fail(key, "missing required field");
  if (!in_->at(key).is_object()) fail(key, "expected object");
  return Node(in_->at(key), (*out_)[key], path_of(key));
}

std::optional<Node> Node::maybe_object(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return object(key);
}

Node Node::section(const std::string& key) const {
  static const json empty = json::object();
  if (!has(key)) return Node(empty, (*out_)[key], path_of(key));
  return object(key);
}

void reject_unknown(const json& in, const json& resolved, const std::string& path) {
  if (!in.is_object() || !resolved.is_object()) return;
  for (const auto& [key, value] : in.items()) {
    const std::string p = path.empty() ? key : path + "." + key;
    if (!resolved.contains(key)) {
      if (value.is_null()) continue;
      throw SchemaError(p, "unknown field");
    }
    reject_unknown(value, resolved.at(key), p);
  }
}

void Context::write(const std::string& name, const std::string& content) {
  io::write_file(out / name, content);
  if (std::find(artifacts.begin(), artifacts.end(), name) == artifacts.end()) artifacts.push_back(name);
}

void Context::write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }

void Context::check(const std::string& name, double value, const std::string& op, double threshold) {
  const bool pass = op == "<=" ? value <= threshold : value >= threshold;
  checks.push_back({name, value, op, threshold, pass});
}

}  // namespace dbeta::cli
