#pragma once

#include <vector>

#include "dbeta/ensemble.hpp"
#include "dbeta/sampler.hpp"

namespace dbeta {

/// Young diagram by row lengths λ_1 ≥ λ_2 ≥ … > 0.
class Partition {
 public:
  Partition() = default;
  /// Trailing zeros are dropped; throws unless nonincreasing and nonnegative.
  explicit Partition(std::vector<long> rows);

  const std::vector<long>& rows() const { return rows_; }
  int length() const { return static_cast<int>(rows_.size()); }
  long size() const;
  /// 1-based row length, 0 past the last row.
  long row(int i) const { return i >= 1 && i <= length() ? rows_[static_cast<std::size_t>(i - 1)] : 0; }
  Partition transpose() const;
  /// (i, j) ∈ λ, 1-based.
  bool contains(int i, long j) const { return j >= 1 && j <= row(i); }

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<long> rows_;
};

/// All partitions of n in reverse lexicographic order.
std::vector<Partition> partitions_of(int n);

struct HookProducts {
  double log_H = 0.0;
  double log_H_prime = 0.0;
};

/// Box by box: H = ∏ (arm + θ·leg + 1), H′ = ∏ (arm + θ·leg + θ).
HookProducts hook_products_boxes(const Partition& lambda, double theta);
/// Same quantities from the row lengths through Γ ratios.
HookProducts hook_products_rows(const Partition& lambda, double theta);

/// ln M⁽ⁿ⁾(λ) = ln n! + n ln θ − ln H − ln H′.
double jack_plancherel_logprob(const Partition& lambda, long n, double theta);

struct VWProducts {
  double log_V = 0.0;
  double log_W = 0.0;
};

/// ln V_m(λ), ln W_m(λ) with λ_i = 0 for i > ℓ(λ); requires m ≥ ℓ(λ).
VWProducts vw_products(const Partition& lambda, int m, double theta);

/// ln of the Poissonized Jack measure: −M + ln V + ln W + |λ| ln(θM).
double poissonized_jack_logprob(const Partition& lambda, double M, double theta);

/// ℓ_i = λ_{N−i+1} + (i − 1)θ in the Jack state space.
Configuration partition_to_config(const Partition& lambda, int n_particles, double theta);
Partition config_to_partition(const Configuration& config);

/// θ^{−5/6} M^{1/3} (row/√M − 2√θ).
double jack_row_statistic(long row, double M, double theta);

/// N = ⌈c √M⌉.
int jack_particle_count(double M, double c);

struct JackBatch {
  SampleBatch batch;
  std::vector<Partition> partitions;
  /// row_statistics[k][s]: statistic of λ_{k+1} in sample s.
  std::vector<std::vector<double>> row_statistics;
};

/// Poissonized Jack measure as an N-particle discrete β-ensemble, sampled by
/// the Metropolis chain. Chains start from equilibrium quantiles.
JackBatch sample_poissonized_jack(double M, double theta, double c, long n_samples, std::uint64_t seed,
                                  int n_rows = 3, long thin_sweeps = 1, int n_chains = 1, int workers = 1);

}  // namespace dbeta
