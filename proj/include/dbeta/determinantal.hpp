#pragma once

#include <vector>

#include <Eigen/Core>

namespace dbeta {

/// Christoffel–Darboux kernel of the θ = 1 Krawtchouk ensemble (N particles
/// on {0..M}), as an (M+1)×(M+1) matrix.
Eigen::MatrixXd krawtchouk_kernel(int n_particles, long m_max);

/// P(ℓ_1 ≤ t) for t = 0..M, via Fredholm determinants of the kernel.
std::vector<double> krawtchouk_min_cdf(int n_particles, long m_max);

/// P(λ_1 ≤ n) for n = 0..n_max under the Poissonized Plancherel measure of
/// rate M (the θ = 1 case), from the discrete Bessel kernel.
std::vector<double> plancherel_top_row_cdf(double M, long n_max);

}  // namespace dbeta
