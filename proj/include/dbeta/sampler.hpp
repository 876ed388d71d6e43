#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "dbeta/ensemble.hpp"
#include "dbeta/weights.hpp"

namespace dbeta {

using Rng = std::mt19937_64;

/// Independent stream for (seed, stream index); splitmix64 mixing.
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

/// Seed of task `index` under a global seed: splitmix64(seed + index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// λ spread evenly over the admissible box.
struct UniformSpread {};

/// Round N γ_i to the lattice, then repair ordering.
struct EquilibriumQuantiles {
  std::vector<double> gammas;
};

using ChainInit = std::variant<UniformSpread, EquilibriumQuantiles, Configuration>;

struct ChainSpec {
  long steps = 0;
  long burn_in = 0;
  long thin = 1;
  std::uint64_t seed = 0;
  ChainInit init = UniformSpread{};

  void validate() const;
  long n_recorded() const { return (steps - burn_in) / thin; }

  /// burn_in = 100 N², thin = N, sized to record `n_samples` configurations.
  static ChainSpec with_defaults(int n_particles, long n_samples, std::uint64_t seed,
                                 ChainInit init = UniformSpread{});
};

struct SampleBatch {
  EnsembleParams params;
  ChainSpec spec;
  nlohmann::json weight_descriptor;
  std::vector<Configuration> configurations;
  double acceptance_rate = 0.0;
  /// Integrated autocorrelation time of ℓ_N, in recorded samples.
  double autocorrelation_time = 0.0;
  /// "mcmc" or "exact".
  std::string origin = "mcmc";
};

/// Log acceptance ratio for moving λ_i by delta = ±1, or nullopt when the
/// move leaves the ordered cone or the weight's support.
std::optional<double> proposal_log_ratio(const Configuration& config, const WeightModel& weight, int index,
                                         int delta);

/// One Metropolis step: i uniform, δ = ±1 with equal probability.
std::pair<Configuration, bool> mcmc_step(const Configuration& config, const WeightModel& weight, Rng& rng);

/// Initial configuration for a chain; throws if it has zero weight.
Configuration initial_configuration(const EnsembleParams& params, const WeightModel& weight,
                                    const ChainInit& init);

/// Single chain, deterministic given (params, weight, spec).
SampleBatch run_chain(const EnsembleParams& params, const WeightModel& weight, const ChainSpec& spec);

/// Independent chains with seeds derived from (spec.seed, chain index),
/// concatenated in chain order. The result does not depend on `workers`.
SampleBatch run_chains(const EnsembleParams& params, const WeightModel& weight, const ChainSpec& spec,
                       int n_chains, int workers = 1);

/// i.i.d. draws by inverse CDF over an exact table.
SampleBatch exact_sample(const ProbabilityTable& table, long count, std::uint64_t seed);

/// Sokal-windowed integrated autocorrelation time of a scalar series.
double integrated_autocorrelation_time(const std::vector<double>& series);

}  // namespace dbeta
