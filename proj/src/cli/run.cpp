#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <set>
#include <unistd.h>

#include "internal.hpp"

#ifndef DBETA_VERSION
#define DBETA_VERSION "0.0.0-dev"
#endif

namespace dbeta::cli {
namespace {

bool looks_like_manifest(const json& j) {
  return j.is_object() && j.contains("subcommand") && j.contains("config") && j.contains("version");
}

int env_workers() {
  const char* v = std::getenv("DBETA_WORKERS");
  if (!v || !*v) return 1;
  try {
    std::size_t used = 0;
    const int w = std::stoi(v, &used);
    if (used != std::string(v).size() || w < 1) throw std::invalid_argument(v);
    return w;
  } catch (const std::exception&) {
    throw UsageError(std::string("DBETA_WORKERS must be a positive integer, got '") + v + "'");
  }
}

json check_json(const Check& c) {
  return {{"name", c.name}, {"value", c.value}, {"op", c.op}, {"threshold", c.threshold}, {"pass", c.pass}};
}

// Moves the staged artifacts into place and writes the manifest last.
void publish(const Context& ctx, const json& manifest) {
  for (const auto& a : ctx.artifacts) fs::rename(ctx.out / a, ctx.target / a);
  io::write_json(ctx.target / "manifest.json", manifest);
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, h] : handlers()) v.push_back(k);
    return v;
  }();
  return names;
}

std::string version_tag() { return DBETA_VERSION; }

RunResult run(const RunRequest& req) {
  RunResult result;
  Context ctx;
  bool created_out = false;
  ctx.subcommand = req.subcommand;
  ctx.target = req.out;
  try {
    const auto& hs = handlers();
    const auto h = hs.find(req.subcommand);
    if (h == hs.end()) throw UsageError("unknown subcommand '" + req.subcommand + "'");
    if (req.out.empty()) throw UsageError("--out is required");

    json cfg = req.config;
    if (looks_like_manifest(cfg)) {
      if (cfg.at("subcommand") != req.subcommand) {
        throw UsageError("manifest was written by `" + cfg.at("subcommand").get<std::string>() + "`, not `" +
                         req.subcommand + "`");
      }
      cfg = json(cfg.at("config"));
    }
    json resolved = json::object();
    const Node root(cfg, resolved, "");
    ctx.seed = req.seed ? *req.seed : root.get<std::uint64_t>("seed", 1);
    root.set("seed", ctx.seed);
    ctx.workers = req.workers ? *req.workers : static_cast<int>(root.at_least("workers", 1, env_workers()));
    if (ctx.workers < 1) throw UsageError("--workers must be positive");
    root.set("workers", ctx.workers);
    ctx.grid_n = req.grid_n;
    ctx.tol = req.tol;

    const fs::path manifest_path = req.out / "manifest.json";
    if (fs::exists(manifest_path)) {
      const json old = io::read_json(manifest_path);
      if (old.value("subcommand", req.subcommand) != req.subcommand) {
        throw UsageError(req.out.string() + " holds artifacts of `" + old.value("subcommand", std::string()) +
                         "`; choose another --out");
      }
    }
    created_out = fs::create_directories(req.out);
    ctx.out = req.out / (".staging-" + std::to_string(::getpid()));
    fs::remove_all(ctx.out);
    fs::create_directories(ctx.out);

    const Node payload = root.object(req.subcommand);
    try {
      h->second(payload, ctx);
    } catch (const SchemaError&) {
      throw;
    } catch (const UsageError&) {
      throw;
    } catch (const std::exception& e) {
      throw std::runtime_error(req.subcommand + ": " + e.what());
    }
    const std::set<std::string> names(subcommands().begin(), subcommands().end());
    for (const auto& [key, value] : cfg.items()) {
      if (key == "seed" || key == "workers") continue;
      if (!names.count(key)) throw SchemaError(key, "unknown field");
    }
    reject_unknown(cfg.at(req.subcommand), resolved.at(req.subcommand), req.subcommand);

    std::sort(ctx.artifacts.begin(), ctx.artifacts.end());
    json manifest = ctx.manifest_extra;
    json checks = json::array();
    bool pass = true;
    for (const auto& c : ctx.checks) {
      checks.push_back(check_json(c));
      pass = pass && c.pass;
    }
    manifest["tool"] = "dbeta";
    manifest["version"] = version_tag();
    manifest["subcommand"] = req.subcommand;
    manifest["config"] = resolved;
    manifest["artifacts"] = ctx.artifacts;
    manifest["checks"] = checks;
    manifest["status"] = pass ? "pass" : "fail";
    publish(ctx, manifest);
    result.exit_code = pass ? kExitPass : kExitCheckFailed;
    result.manifest = std::move(manifest);
  } catch (const SchemaError& e) {
    result.exit_code = kExitUsage;
    result.error = std::string("config error: ") + e.what();
  } catch (const UsageError& e) {
    result.exit_code = kExitUsage;
    result.error = e.what();
  } catch (const std::exception& e) {
    result.exit_code = kExitCheckFailed;
    result.error = e.what();
  }
  if (!ctx.out.empty()) {
    std::error_code ec;
    fs::remove_all(ctx.out, ec);
    if (created_out && result.manifest.is_null() && fs::is_empty(req.out, ec)) fs::remove(req.out, ec);
  }
  result.checks = ctx.checks;
  result.messages = ctx.messages;
  return result;
}

int main(int argc, char** argv) {
  CLI::App app{"dbeta: discrete beta-ensembles laboratory"};
  app.set_version_flag("--version", version_tag());
  app.require_subcommand(1);
  struct Args {
    std::string config, out;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers, grid_n;
    std::optional<double> tol;
  };
  std::map<std::string, Args> args;
  for (const auto& name : subcommands()) {
    auto* sub = app.add_subcommand(name);
    auto& a = args[name];
    sub->add_option("--config", a.config, "experiment config or manifest (JSON)")->required();
    sub->add_option("--out", a.out, "artifact directory")->required();
    sub->add_option("--seed", a.seed, "global seed");
    sub->add_option("--workers", a.workers, "worker threads (default $DBETA_WORKERS or 1)");
    if (name == "equilibrium") {
      sub->add_option("--grid-n", a.grid_n, "grid cells");
      sub->add_option("--tol", a.tol, "KKT tolerance");
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  const std::string name = app.get_subcommands().front()->get_name();
  const Args& a = args[name];

  RunRequest req{name, {}, a.out, a.seed, a.workers, a.grid_n, a.tol};
  try {
    req.config = io::read_json(a.config);
  } catch (const std::exception& e) {
    std::cerr << "dbeta: " << e.what() << "\n";
    return kExitUsage;
  }
  const RunResult r = run(req);
  for (const auto& m : r.messages) std::cout << m << "\n";
  for (const auto& c : r.checks) {
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << io::format_double(c.value) << " " << c.op << " "
              << io::format_double(c.threshold) << "\n";
  }
  if (!r.error.empty()) std::cerr << "dbeta: " << r.error << "\n";
  return r.exit_code;
}

}  // namespace dbeta::cli
