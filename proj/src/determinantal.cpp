#include "dbeta/determinantal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>
#include <boost/math/special_functions/bessel.hpp>

#include "dbeta/special.hpp"

namespace dbeta {
namespace {

// Below this the gap probability is treated as zero and the scan stops.
constexpr double kNegligible = 1e-16;

}  // namespace

Eigen::MatrixXd krawtchouk_kernel(int n, long m) {
  if (n < 1 || m + 1 < n) throw std::invalid_argument("krawtchouk_kernel: need 1 <= N <= M + 1");
  const Eigen::Index sites = m + 1;
  const double M = static_cast<double>(m);
  // Orthonormal functions φ_k(x) = p_k(x) √w(x) for w = C(M, x) 2^{−M}, from
  // the three-term recurrence x p_k = p_{k+1} + (M/2) p_k + b_k² p_{k−1}.
  Eigen::ArrayXXd phi(n, sites);
  for (Eigen::Index x = 0; x < sites; ++x) {
    phi(0, x) = std::exp(0.5 * (log_binomial(M, static_cast<double>(x)) - M * std::log(2.0)));
  }
  auto b = [M](int k) { return 0.5 * std::sqrt(k * (M - k + 1.0)); };
  const Eigen::ArrayXXd xc = (Eigen::ArrayXd::LinSpaced(sites, 0.0, M) - 0.5 * M).transpose();
  if (n > 1) phi.row(1) = xc * phi.row(0) / b(1);
  for (int k = 1; k + 1 < n; ++k) phi.row(k + 1) = (xc * phi.row(k) - b(k) * phi.row(k - 1)) / b(k + 1);
  const Eigen::MatrixXd f = phi.matrix();
  return f.transpose() * f;
}

std::vector<double> krawtchouk_min_cdf(int n, long m) {
  const Eigen::MatrixXd K = krawtchouk_kernel(n, m);
  // P(ℓ_1 ≥ t) = det(I − K) on {0..t−1}; F(t) = 1 − P(ℓ_1 ≥ t + 1).
  std::vector<double> F(static_cast<std::size_t>(m + 1), 1.0);
  for (long t = 0; t <= m; ++t) {
    const Eigen::Index size = t + 1;
    const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(size, size) - K.topLeftCorner(size, size);
    const double gap = std::max(0.0, A.partialPivLu().determinant());
    F[static_cast<std::size_t>(t)] = 1.0 - gap;
    if (gap < kNegligible) break;
  }
  return F;
}

std::vector<double> plancherel_top_row_cdf(double M, long n_max) {
  if (!(M > 0.0)) throw std::invalid_argument("plancherel_top_row_cdf: M must be positive");
  if (n_max < 0) throw std::invalid_argument("plancherel_top_row_cdf: negative n_max");
  const double z = 2.0 * std::sqrt(M);
  // J_k(z) is negligible once k exceeds z by a few multiples of z^{1/3}.
  const long tail = static_cast<long>(std::ceil(z + 12.0 * std::cbrt(z) + 30.0));
  const long kmax = n_max + 2 * tail + 1;
  std::vector<double> J(static_cast<std::size_t>(kmax + 1));
  for (long k = 0; k <= kmax; ++k) J[static_cast<std::size_t>(k)] = boost::math::cyl_bessel_j(static_cast<double>(k), z);

  std::vector<double> F(static_cast<std::size_t>(n_max + 1), 1.0);
  for (long n = 0; n <= n_max; ++n) {
    // K(x, y) = Σ_{s≥1} J_{x+s} J_{y+s} on x, y ∈ {n, …, n + tail}.
    const long rows = tail + 1;
    const long cols = tail;
    Eigen::MatrixXd C(rows, cols);
    for (long x = 0; x < rows; ++x) {
      for (long s = 1; s <= cols; ++s) C(x, s - 1) = J[static_cast<std::size_t>(n + x + s)];
    }
    const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(rows, rows) - C * C.transpose();
    F[static_cast<std::size_t>(n)] = std::clamp(A.partialPivLu().determinant(), 0.0, 1.0);
  }
  return F;
}

}  // namespace dbeta
