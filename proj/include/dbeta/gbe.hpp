#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "dbeta/equilibrium.hpp"

namespace dbeta {

/// Symmetric tridiagonal matrix; off-diagonal entries are nonnegative.
struct TridiagonalMatrix {
  Eigen::VectorXd diagonal;
  Eigen::VectorXd offdiagonal;

  int size() const { return static_cast<int>(diagonal.size()); }
  Eigen::MatrixXd dense() const;
};

/// Tridiagonal GβE: d_i = g_i √(2/β), o_i = χ_{β(N−i)} / √β. The spectrum of
/// λ/√N fills [−2, 2].
TridiagonalMatrix sample_gbe(int n, double beta, std::uint64_t seed);

/// Number of eigenvalues strictly below x (Sturm sequence).
int sturm_count(const TridiagonalMatrix& t, double x);

struct ExtremeEigenvalues {
  std::vector<double> smallest;  // ascending
  std::vector<double> largest;   // descending
};

/// k smallest and k largest eigenvalues by Sturm bisection, each to 1e-10.
ExtremeEigenvalues extreme_eigenvalues(const TridiagonalMatrix& t, int k);

/// Full ascending spectrum (QL on the tridiagonal form).
Eigen::VectorXd tridiagonal_eigenvalues(const TridiagonalMatrix& t);

/// Semicircle law on [−2, 2].
double semicircle_density(double x);
double semicircle_cdf(double x);
double semicircle_quantile(double p);

/// γ̃_k with semicircle mass (k − 1/2)/N below it.
Eigen::VectorXd semicircle_classical_locations(int n);

enum class EdgeReference {
  Classical,  // N^{2/3} k^{1/3} (x/N − γ̃)
  Edge        // N^{2/3} k^{1/3} (x/N ∓ 2)
};

struct GbeEdgeOptions {
  int k = 1;
  EdgeSide side = EdgeSide::Left;
  EdgeReference reference = EdgeReference::Classical;
  int workers = 1;
};

/// Rescaled k-th extreme particle x = √N λ of independent GβE samples. The
/// right edge uses x_{N−k+1} against γ̃_{N−k+1} (or +2).
std::vector<double> gbe_edge_samples(int n, double beta, long n_samples, std::uint64_t seed,
                                     const GbeEdgeOptions& options = {});

/// All eigenvalues λ/√N of `n_matrices` independent samples, pooled.
std::vector<double> gbe_pooled_spectrum(int n, double beta, long n_matrices, std::uint64_t seed);

}  // namespace dbeta
