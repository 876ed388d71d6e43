#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "dbeta/weights.hpp"

namespace dbeta {

using Lambdas = std::vector<long>;

/// Parameters (θ, N, a(N), b(N)) of the state space.
///
/// Positions are ℓ_i = a + λ_i + θ i (i = 1..N) with nondecreasing integers
/// 1 ≤ λ_1 ≤ … ≤ λ_N ≤ b − a − Nθ − 1. An infinite a (b) removes the lower
/// (upper) bound on λ; positions are then measured from the origin.
struct EnsembleParams {
  double theta = 1.0;
  int n_particles = 1;
  double a_lattice = -std::numeric_limits<double>::infinity();
  double b_lattice = std::numeric_limits<double>::infinity();

  void validate() const;

  bool lower_bounded() const { return a_lattice > -std::numeric_limits<double>::infinity(); }
  bool upper_bounded() const { return b_lattice < std::numeric_limits<double>::infinity(); }
  double origin() const { return lower_bounded() ? a_lattice : 0.0; }

  /// Smallest / largest admissible λ; ±LONG bounds when unbounded.
  long lambda_min() const;
  long lambda_max() const;

  /// Position of particle i (0-based) for a given λ_i.
  double position(int i, long lambda) const { return origin() + static_cast<double>(lambda) + theta * (i + 1); }

  /// θ = 1 particles on {0, …, M}.
  static EnsembleParams krawtchouk(int n_particles, long m_max);
  /// Jack embedding: ℓ_1 ≥ 0, no upper bound.
  static EnsembleParams jack(int n_particles, double theta);
};

bool operator==(const EnsembleParams& a, const EnsembleParams& b);

/// An ordered point of the state space, stored as λ.
class Configuration {
 public:
  Configuration(EnsembleParams params, Lambdas lambdas);

  const EnsembleParams& params() const { return params_; }
  const Lambdas& lambdas() const { return lambdas_; }
  int size() const { return params_.n_particles; }

  double position(int i) const { return params_.position(i, lambdas_[static_cast<std::size_t>(i)]); }
  Eigen::VectorXd positions() const;

  friend bool operator==(const Configuration& a, const Configuration& b) {
    return a.params_ == b.params_ && a.lambdas_ == b.lambdas_;
  }
  friend bool operator<(const Configuration& a, const Configuration& b) { return a.lambdas_ < b.lambdas_; }

 private:
  EnsembleParams params_;
  Lambdas lambdas_;
};

/// Builds a configuration from explicit positions; throws if they are not on
/// the lattice of `params`.
Configuration configuration_from_positions(const EnsembleParams& params, const std::vector<double>& positions);

/// Holes of a θ = 1 configuration on {0..M}.
struct HoleConfiguration {
  long m_max = 0;
  std::vector<long> holes;
};

/// Σ_{i<j} ln[Γ(d+1)Γ(d+θ) / (Γ(d)Γ(d+1−θ))] with d = ℓ_j − ℓ_i.
double log_interaction(const Configuration& config);

/// log_interaction + Σ ln w(ℓ_i); −∞ when a particle leaves the support.
double log_density_unnormalized(const Configuration& config, const WeightModel& weight);

/// Inclusive λ bounds used to make an enumeration finite.
struct LambdaBox {
  long lo = 0;
  long hi = 0;
};

/// λ box induced by a position box: ℓ_1 ≥ box.lo and ℓ_N ≤ box.hi.
LambdaBox lambda_box_for_positions(const EnsembleParams& params, const PositionBox& box);

class EnumerationCapExceeded : public std::runtime_error {
 public:
  EnumerationCapExceeded(double count, double cap);
  double count() const { return count_; }

 private:
  double count_;
};

inline constexpr double kDefaultEnumerationCap = 1e7;

/// Number of configurations in the (params ∩ box) state space.
double count_configurations(const EnsembleParams& params, const LambdaBox& box);

/// Visits every configuration exactly once, lexicographic in λ.
void for_each_configuration(const EnsembleParams& params, const LambdaBox& box,
                            const std::function<void(const Lambdas&)>& visit,
                            double cap = kDefaultEnumerationCap);

std::vector<Configuration> enumerate_configurations(const EnsembleParams& params, const LambdaBox& box,
                                                    double cap = kDefaultEnumerationCap);

/// Exact law on an enumerable instance.
struct ProbabilityTable {
  EnsembleParams params;
  std::vector<Configuration> configurations;
  std::vector<double> log_weights;
  std::vector<double> probabilities;
  double log_partition = 0.0;

  double partition() const;
};

/// Exact distribution over `box`, or over the weight's support when no box is
/// given. Configurations of zero weight are dropped.
ProbabilityTable exact_distribution(const EnsembleParams& params, const WeightModel& weight,
                                    std::optional<LambdaBox> box = std::nullopt,
                                    double cap = kDefaultEnumerationCap);

/// Stieltjes transform of the empirical measure of ℓ_i / N.
std::complex<double> stieltjes_GN(const Configuration& config, std::complex<double> z);

/// Complement of the particle set in {0..M} (θ = 1 only).
HoleConfiguration holes_of(const Configuration& config, long m_max);

/// Inverse of holes_of: particles on {0..M} in Krawtchouk parameters.
Configuration particles_of(const HoleConfiguration& holes);

/// −ln w(x) − 2 Σ_{k≠x} ln|x − k| over k ∈ {0..M}.
double dual_log_weight(long x, const WeightModel& weight, long m_max);

/// Dual weight on {0..M} as a tabulated model.
WeightModel dual_weight(const WeightModel& weight, long m_max);

/// Discrete dual measure of a configuration: counts of free lattice sites
/// between neighbouring particles, normalized by θN (point masses at x/N).
std::vector<double> dual_empirical_sites(const Configuration& config);

}  // namespace dbeta
