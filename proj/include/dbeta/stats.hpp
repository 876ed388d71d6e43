#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "dbeta/ensemble.hpp"
#include "dbeta/equilibrium.hpp"

namespace dbeta {

/// Right-continuous empirical CDF.
class Ecdf {
 public:
  explicit Ecdf(std::vector<double> values);
  double operator()(double x) const;
  const std::vector<double>& sorted() const { return values_; }
  std::size_t size() const { return values_.size(); }
  /// (x, F(x)) at each distinct sample value.
  std::vector<std::pair<double, double>> steps() const;

 private:
  std::vector<double> values_;
};

struct KSResult {
  double distance = 0.0;
  long n_a = 0;
  long n_b = 0;  // 0 for a one-sample test
};

/// sup |F_a − F_b| by a merge scan over both samples.
KSResult ks_distance(std::vector<double> a, std::vector<double> b);
/// sup |F_n − F| against a continuous CDF.
KSResult ks_one_sample(std::vector<double> values, const std::function<double(double)>& cdf);

/// sup |F − F_n| between a discrete law (ascending atoms with F at each atom)
/// and the empirical CDF of `values`.
KSResult ks_distance_to_law(const std::vector<double>& atoms, const std::vector<double>& cdf,
                            std::vector<double> values);

/// Bulk index window [⌈lo·N⌉, ⌊hi·N⌋], 1-based.
struct BulkWindow {
  double lo = 0.05;
  double hi = 0.95;
};

struct RigidityProfile {
  int n = 0;
  std::vector<int> indices;          // 1-based bulk indices
  std::vector<double> max_deviation; // per sample, max over the window
  std::vector<double> median;        // per index
  std::vector<double> q90;
  std::vector<double> q99;

  double fraction_below(double threshold) const;
};

/// D_i = N^{2/3} min(i, N−i+1)^{1/3} |ℓ_i/N − γ_i|.
RigidityProfile rigidity_profile(const std::vector<Configuration>& samples, const Eigen::VectorXd& gammas,
                                 BulkWindow window = {});

struct EdgeStatistics {
  std::vector<double> values;
  int n = 0;
  int k = 1;
  double s = 1.0;
  EdgeSide side = EdgeSide::Left;
};

/// N^{2/3} k^{1/3} s^{2/3} (ℓ_j/N − γ_j) with j = k on the left and
/// j = N − k + 1 on the right.
EdgeStatistics rescale_edge(const std::vector<Configuration>& samples, const Eigen::VectorXd& gammas, double s, int k,
                            EdgeSide side);
std::vector<EdgeStatistics> rescale_edge(const std::vector<Configuration>& samples, const Eigen::VectorXd& gammas,
                                         double s, const std::vector<int>& ks, EdgeSide side);

struct GapStatistics {
  std::vector<double> values;
  int n = 0;
  int k = 1;
  double L = 1.0;
  /// θ L^{1/3} N^{−1/3}: no rescaled gap can fall below it.
  double floor = 0.0;

  double fraction_below(double x) const;
};

/// (ℓ_{k+1} − ℓ_k) L^{1/3} N^{−1/3}; L ≤ 0 selects N^{1/4}.
GapStatistics gap_statistics(const std::vector<Configuration>& samples, int k, double L = 0.0);

}  // namespace dbeta
