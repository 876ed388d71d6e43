#include <doctest.h>

#include "dbeta/cli.hpp"
#include "dbeta/io.hpp"
#include "temp_dir.hpp"

using namespace dbeta;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

cli::RunResult run(const std::string& sub, const json& config, const fs::path& out,
                   std::optional<int> workers = std::nullopt) {
  cli::RunRequest r;
  r.subcommand = sub;
  r.config = config;
  r.out = out;
  r.workers = workers;
  return cli::run(r);
}

json small_sample(const std::string& dir) {
  return {{"seed", 11},
          {"sample",
           {{"ensemble", {{"theta", 1}, {"n", 3}}}, {"weight", {{"kind", "krawtchouk"}, {"M", 6}}}, {"n_samples", 200}}},
          {"compare", {{"a", dir}, {"b", dir}}}};
}

}  // namespace

TEST_CASE("duality-check reports an exact match") {
  TempDir tmp;
  for (auto [n, m] : {std::pair{2, 3}, std::pair{3, 5}}) {
    const auto r = run("duality-check", {{"duality-check", {{"n", n}, {"M", m}}}}, tmp / ("d" + std::to_string(n)));
    CHECK(r.exit_code == cli::kExitPass);
    REQUIRE(!r.messages.empty());
    CHECK(r.messages.front() == "exact match");
    const auto d = io::read_json(tmp / ("d" + std::to_string(n)) / "duality.json");
    CHECK(d.at("result") == "exact match");
  }
}

TEST_CASE("compare on identical batches") {
  TempDir tmp;
  const std::string b = (tmp / "batch").string();
  REQUIRE(run("sample", small_sample(b), b).exit_code == 0);
  auto cfg = small_sample(b);
  cfg["compare"]["checks"] = {{"ks_max", 0.0}};
  const auto r = run("compare", cfg, tmp / "cmp");
  CHECK(r.exit_code == cli::kExitPass);
  CHECK(io::read_json(tmp / "cmp" / "compare.json").at("ks") == 0.0);
  CHECK(fs::exists(tmp / "cmp" / "compare.svg"));
}

TEST_CASE("schema errors exit 2 and name the field") {
  TempDir tmp;
  auto cfg = small_sample("x");
  cfg["sample"]["ensemble"].erase("theta");
  auto r = run("sample", cfg, tmp / "o");
  CHECK(r.exit_code == cli::kExitUsage);
  CHECK(r.error.find("sample.ensemble.theta") != std::string::npos);
  CHECK(!fs::exists(tmp / "o"));

  cfg = small_sample("x");
  cfg["sample"]["n_samples"] = "many";
  r = run("sample", cfg, tmp / "o");
  CHECK(r.exit_code == cli::kExitUsage);
  CHECK(r.error.find("sample.n_samples: expected integer") != std::string::npos);

  cfg = small_sample("x");
  cfg["sample"]["chain"] = {{"thinn", 3}};
  r = run("sample", cfg, tmp / "o");
  CHECK(r.exit_code == cli::kExitUsage);
  CHECK(r.error.find("sample.chain.thinn: unknown field") != std::string::npos);

  cfg = small_sample("x");
  cfg["sample"]["weight"]["kind"] = "hahn";
  r = run("sample", cfg, tmp / "o");
  CHECK(r.error.find("sample.weight.kind") != std::string::npos);

  CHECK(run("sample", {{"seed", 1}}, tmp / "o").error.find("sample: missing required field") != std::string::npos);
  CHECK(run("bogus", small_sample("x"), tmp / "o").exit_code == cli::kExitUsage);
  CHECK(run("jack", {{"jack", {{"M", 4}, {"theta", 1}, {"c", 3}, {"samples", 5}}}}, tmp / "o").exit_code ==
        cli::kExitUsage);
}

TEST_CASE("failed checks exit 1") {
  TempDir tmp;
  const auto r = run("duality-check", {{"duality-check", {{"n", 2}, {"M", 3}, {"tol", 1e-30}}}}, tmp / "d");
  CHECK(r.exit_code == cli::kExitCheckFailed);
  CHECK(io::read_json(tmp / "d" / "manifest.json").at("status") == "fail");
}

TEST_CASE("manifest round trip reproduces every CSV") {
  TempDir tmp;
  auto cfg = small_sample("unused");
  cfg["sample"]["chains"] = 3;
  REQUIRE(run("sample", cfg, tmp / "a").exit_code == 0);
  const auto manifest = io::read_json(tmp / "a" / "manifest.json");
  CHECK(manifest.at("version") == cli::version_tag());
  CHECK(manifest.at("config").at("sample").at("chain").at("thin") == 3);
  CHECK(manifest.at("config").at("seed") == 11);
  REQUIRE(run("sample", manifest, tmp / "b", 3).exit_code == 0);
  for (const auto& name : manifest.at("artifacts")) {
    const std::string f = name.get<std::string>();
    if (f.size() > 4 && f.substr(f.size() - 4) == ".csv") CHECK(slurp(tmp / "a" / f) == slurp(tmp / "b" / f));
  }
  CHECK(run("equilibrium", manifest, tmp / "c").exit_code == cli::kExitUsage);
}

TEST_CASE("subcommands keep to their own directories") {
  TempDir tmp;
  const std::string b = (tmp / "batch").string();
  REQUIRE(run("sample", small_sample(b), b).exit_code == 0);
  const std::string before = slurp(tmp / "batch" / "samples.csv");
  auto cfg = small_sample(b);
  CHECK(run("compare", cfg, b).exit_code == cli::kExitUsage);
  cfg["gaps"] = {{"batch", b}};
  CHECK(run("gaps", cfg, b).exit_code == cli::kExitUsage);
  CHECK(run("gaps", cfg, tmp / "g").exit_code == cli::kExitPass);
  CHECK(slurp(tmp / "batch" / "samples.csv") == before);
  CHECK(io::read_json(tmp / "batch" / "manifest.json").at("subcommand") == "sample");
}

TEST_CASE("exact sampling, tv check and render") {
  TempDir tmp;
  json cfg = {{"sample",
               {{"ensemble", {{"theta", 1}, {"n", 2}}},
                {"weight", {{"kind", "krawtchouk"}, {"M", 4}}},
                {"n_samples", 20000},
                {"method", "exact"},
                {"checks", {{"tv_max", 0.02}}}}},
              {"render", {{"input", (tmp / "eq").string()}}},
              {"equilibrium", {{"model", {{"kind", "krawtchouk"}, {"m", 4}}}, {"method", "closed-form"}, {"grid_n", 200}}}};
  const auto r = run("sample", cfg, tmp / "ex");
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(tmp / "ex" / "probabilities.csv"));
  REQUIRE(run("equilibrium", cfg, tmp / "eq").exit_code == 0);
  REQUIRE(run("render", cfg, tmp / "fig").exit_code == 0);
  const std::string first = slurp(tmp / "fig" / "measure.svg");
  REQUIRE(run("render", cfg, tmp / "fig").exit_code == 0);
  CHECK(slurp(tmp / "fig" / "measure.svg") == first);
}

TEST_CASE("worker count does not change artifacts") {
  TempDir tmp;
  json cfg = {{"seed", 4}, {"gbe", {{"n", 20}, {"samples", 300}, {"side", "right"}}}};
  REQUIRE(run("gbe", cfg, tmp / "w1", 1).exit_code == 0);
  REQUIRE(run("gbe", cfg, tmp / "w3", 3).exit_code == 0);
  CHECK(slurp(tmp / "w1" / "gbe_edge.csv") == slurp(tmp / "w3" / "gbe_edge.csv"));
}
