#include "dbeta/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "dbeta/parallel.hpp"
#include "dbeta/special.hpp"

namespace dbeta {
namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Mutable chain state; λ plus cached per-particle log-weights.
class Chain {
 public:
  Chain(const EnsembleParams& params, const WeightModel& weight, Lambdas lambdas)
      : params_(params), weight_(weight), lam_(std::move(lambdas)), lw_(lam_.size()) {
    for (std::size_t i = 0; i < lam_.size(); ++i) lw_[i] = weight_.log_w(position(i, lam_[i]));
  }

  double position(std::size_t i, long lambda) const { return params_.position(static_cast<int>(i), lambda); }

  // Log ratio for λ_i → λ_i + delta, or nullopt if the move is not admissible.
  std::optional<double> log_ratio(std::size_t i, int delta, double* new_lw) const {
    const std::size_t n = lam_.size();
    const long target = lam_[i] + delta;
    if (delta > 0) {
      if (i + 1 < n ? target > lam_[i + 1] : target > params_.lambda_max()) return std::nullopt;
    } else {
      if (i > 0 ? target < lam_[i - 1] : target < params_.lambda_min()) return std::nullopt;
    }
    const double w = weight_.log_w(position(i, target));
    if (w == kNegInf) return std::nullopt;
    *new_lw = w;

    const double theta = params_.theta;
    double prod = 1.0;
    double log_acc = 0.0;
    int since = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double gap = j > i ? static_cast<double>(lam_[j] - lam_[i]) + theta * static_cast<double>(j - i)
                               : static_cast<double>(lam_[i] - lam_[j]) + theta * static_cast<double>(i - j);
      const bool grows = (j > i) == (delta < 0);
      if (grows) {
        prod *= (gap + 1.0) * (gap + theta) / (gap * (gap + 1.0 - theta));
      } else {
        prod *= (gap - 1.0) * (gap - theta) / (gap * (gap - 1.0 + theta));
      }
      if (++since == 64) {
        int e = 0;
        prod = std::frexp(prod, &e);
        log_acc += e * 0.69314718055994530942;
        since = 0;
      }
    }
    return log_acc + std::log(prod) + w - lw_[i];
  }

  bool step(Rng& rng) {
    const std::size_t n = lam_.size();
    const auto i = static_cast<std::size_t>(rng() % n);
    const int delta = (rng() & 1U) ? 1 : -1;
    double new_lw = 0.0;
    const auto r = log_ratio(i, delta, &new_lw);
    if (!r) return false;
    if (*r < 0.0 && !(uniform01(rng) < std::exp(*r))) return false;
    lam_[i] += delta;
    lw_[i] = new_lw;
    return true;
  }

  const Lambdas& lambdas() const { return lam_; }

 private:
  const EnsembleParams& params_;
  const WeightModel& weight_;
  Lambdas lam_;
  std::vector<double> lw_;
};

LambdaBox admissible_box(const EnsembleParams& params, const WeightModel& weight) {
  return lambda_box_for_positions(params, weight.support_box());
}

}  // namespace

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed ^ (0xd1b54a32d192ed03ULL * (stream + 1));
  std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(s)), static_cast<std::uint32_t>(splitmix64(s)),
                    static_cast<std::uint32_t>(splitmix64(s)), static_cast<std::uint32_t>(splitmix64(s))};
  return Rng(seq);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = seed + index;
  return splitmix64(s);
}

void ChainSpec::validate() const {
  if (burn_in < 0) throw std::invalid_argument("ChainSpec: burn_in must be nonnegative");
  if (steps <= burn_in) throw std::invalid_argument("ChainSpec: steps must exceed burn_in");
  if (thin < 1) throw std::invalid_argument("ChainSpec: thin must be at least 1");
}

ChainSpec ChainSpec::with_defaults(int n_particles, long n_samples, std::uint64_t seed, ChainInit init) {
  ChainSpec s;
  const long n = n_particles;
  s.burn_in = 100 * n * n;
  s.thin = n;
  s.steps = s.burn_in + s.thin * std::max(1L, n_samples);
  s.seed = seed;
  s.init = std::move(init);
  return s;
}

std::optional<double> proposal_log_ratio(const Configuration& config, const WeightModel& weight, int index,
                                         int delta) {
  if (index < 0 || index >= config.size()) throw std::out_of_range("proposal_log_ratio: index");
  if (delta != 1 && delta != -1) throw std::invalid_argument("proposal_log_ratio: delta must be +1 or -1");
  const Chain chain(config.params(), weight, config.lambdas());
  double new_lw = 0.0;
  return chain.log_ratio(static_cast<std::size_t>(index), delta, &new_lw);
}

std::pair<Configuration, bool> mcmc_step(const Configuration& config, const WeightModel& weight, Rng& rng) {
  Chain chain(config.params(), weight, config.lambdas());
  const bool accepted = chain.step(rng);
  return {Configuration(config.params(), chain.lambdas()), accepted};
}

Configuration initial_configuration(const EnsembleParams& params, const WeightModel& weight,
                                    const ChainInit& init) {
  params.validate();
  const auto n = static_cast<std::size_t>(params.n_particles);
  const LambdaBox box = admissible_box(params, weight);
  if (box.hi < box.lo) throw std::runtime_error("chain init: support box is empty for these parameters");

  Lambdas lam(n);
  if (const auto* c = std::get_if<Configuration>(&init)) {
    if (!(c->params() == params)) throw std::runtime_error("chain init: configuration has different parameters");
    lam = c->lambdas();
  } else if (const auto* q = std::get_if<EquilibriumQuantiles>(&init)) {
    if (q->gammas.size() != n) throw std::runtime_error("chain init: need one quantile per particle");
    for (std::size_t i = 0; i < n; ++i) {
      const double target = params.n_particles * q->gammas[i] - params.origin() - params.theta * (i + 1.0);
      lam[i] = std::clamp(static_cast<long>(std::lround(target)), box.lo, box.hi);
    }
    for (std::size_t i = 1; i < n; ++i) lam[i] = std::max(lam[i], lam[i - 1]);
  } else {
    const double span = static_cast<double>(box.hi - box.lo + 1);
    for (std::size_t i = 0; i < n; ++i) {
      lam[i] = box.lo + static_cast<long>(std::floor((i + 0.5) * span / static_cast<double>(n)));
      lam[i] = std::min(lam[i], box.hi);
    }
  }
  Configuration config(params, std::move(lam));
  if (log_density_unnormalized(config, weight) == kNegInf) {
    throw std::runtime_error("chain init: initial configuration has zero weight");
  }
  return config;
}

SampleBatch run_chain(const EnsembleParams& params, const WeightModel& weight, const ChainSpec& spec) {
  spec.validate();
  const Configuration start = initial_configuration(params, weight, spec.init);
  Chain chain(params, weight, start.lambdas());
  Rng rng = make_rng(spec.seed);

  SampleBatch batch{params, spec, describe_weight(weight), {}, 0.0, 0.0, "mcmc"};
  batch.configurations.reserve(static_cast<std::size_t>(spec.n_recorded()));
  long accepted = 0;
  for (long t = 1; t <= spec.steps; ++t) {
    if (chain.step(rng)) ++accepted;
    if (t > spec.burn_in && (t - spec.burn_in) % spec.thin == 0) {
      batch.configurations.emplace_back(params, chain.lambdas());
    }
  }
  batch.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(spec.steps);

  std::vector<double> top;
  top.reserve(batch.configurations.size());
  for (const auto& c : batch.configurations) top.push_back(c.position(c.size() - 1));
  batch.autocorrelation_time = integrated_autocorrelation_time(top);
  return batch;
}

SampleBatch run_chains(const EnsembleParams& params, const WeightModel& weight, const ChainSpec& spec,
                       int n_chains, int workers) {
  if (n_chains < 1) throw std::invalid_argument("run_chains: need at least one chain");
  std::vector<std::optional<SampleBatch>> parts(static_cast<std::size_t>(n_chains));
  auto run_one = [&](int c) {
    ChainSpec s = spec;
    s.seed = derive_seed(spec.seed, static_cast<std::uint64_t>(c));
    parts[static_cast<std::size_t>(c)] = run_chain(params, weight, s);
  };
  parallel_for(n_chains, workers, [&](long c) { run_one(static_cast<int>(c)); });

  SampleBatch merged{params, spec, describe_weight(weight), {}, 0.0, 0.0, "mcmc"};
  for (auto& p : parts) {
    merged.acceptance_rate += p->acceptance_rate / n_chains;
    merged.autocorrelation_time = std::max(merged.autocorrelation_time, p->autocorrelation_time);
    std::move(p->configurations.begin(), p->configurations.end(), std::back_inserter(merged.configurations));
  }
  return merged;
}

SampleBatch exact_sample(const ProbabilityTable& table, long count, std::uint64_t seed) {
  if (count < 0) throw std::invalid_argument("exact_sample: negative count");
  ChainSpec spec;
  spec.seed = seed;
  SampleBatch batch{table.params, spec, nlohmann::json::object(), {}, 1.0, 1.0, "exact"};
  if (count == 0) return batch;
  std::vector<double> cdf(table.probabilities.size());
  std::partial_sum(table.probabilities.begin(), table.probabilities.end(), cdf.begin());
  Rng rng = make_rng(seed);
  batch.configurations.reserve(static_cast<std::size_t>(count));
  for (long k = 0; k < count; ++k) {
    const double u = uniform01(rng) * cdf.back();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    batch.configurations.push_back(table.configurations[static_cast<std::size_t>(it - cdf.begin())]);
  }
  return batch;
}

double integrated_autocorrelation_time(const std::vector<double>& series) {
  const std::size_t n = series.size();
  if (n < 2) return 1.0;
  const double mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = series[i] - mean;
  const double c0 = std::inner_product(x.begin(), x.end(), x.begin(), 0.0) / static_cast<double>(n);
  if (c0 == 0.0) return 1.0;
  double tau = 1.0;
  for (std::size_t t = 1; t < n; ++t) {
    double ct = 0.0;
    for (std::size_t i = 0; i + t < n; ++i) ct += x[i] * x[i + t];
    tau += 2.0 * ct / (static_cast<double>(n) * c0);
    // Sokal's automatic window, c = 5.
    if (static_cast<double>(t) >= 5.0 * tau) break;
  }
  return std::max(tau, 1.0 / static_cast<double>(n));
}

}  // namespace dbeta
