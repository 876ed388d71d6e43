#include "dbeta/gbe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <boost/math/tools/roots.hpp>

#include "dbeta/parallel.hpp"
#include "dbeta/sampler.hpp"
#include "dbeta/special.hpp"

namespace dbeta {
namespace {

constexpr double kEigTol = 1e-11;

std::pair<double, double> gershgorin(const TridiagonalMatrix& t) {
  const int n = t.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(t.offdiagonal[i - 1]);
    if (i + 1 < n) r += std::abs(t.offdiagonal[i]);
    lo = std::min(lo, t.diagonal[i] - r);
    hi = std::max(hi, t.diagonal[i] + r);
  }
  return {lo - 1e-9, hi + 1e-9};
}

// j-th smallest eigenvalue (0-based).
double bisect_eigenvalue(const TridiagonalMatrix& t, int j, double lo, double hi) {
  while (hi - lo > kEigTol) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (sturm_count(t, mid) > j) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

Eigen::MatrixXd TridiagonalMatrix::dense() const {
  const int n = size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  m.diagonal() = diagonal;
  for (int i = 0; i + 1 < n; ++i) {
    m(i, i + 1) = offdiagonal[i];
    m(i + 1, i) = offdiagonal[i];
  }
  return m;
}

TridiagonalMatrix sample_gbe(int n, double beta, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_gbe: N must be positive");
  if (!(beta > 0.0)) throw std::invalid_argument("sample_gbe: beta must be positive");
  Rng rng = make_rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  TridiagonalMatrix t;
  t.diagonal.resize(n);
  t.offdiagonal.resize(std::max(0, n - 1));
  const double ds = std::sqrt(2.0 / beta);
  for (int i = 0; i < n; ++i) t.diagonal[i] = ds * normal(rng);
  for (int i = 1; i < n; ++i) {
    // χ_k = √(Gamma(k/2, scale 2)).
    std::gamma_distribution<double> g(beta * (n - i) / 2.0, 2.0);
    t.offdiagonal[i - 1] = std::sqrt(g(rng)) / std::sqrt(beta);
  }
  return t;
}

int sturm_count(const TridiagonalMatrix& t, double x) {
  const int n = t.size();
  int count = 0;
  double q = 1.0;
  for (int i = 0; i < n; ++i) {
    const double b2 = i > 0 ? t.offdiagonal[i - 1] * t.offdiagonal[i - 1] : 0.0;
    q = t.diagonal[i] - x - (i > 0 ? b2 / q : 0.0);
    if (q == 0.0) q = -std::numeric_limits<double>::epsilon() * (std::abs(x) + 1.0);
    if (q < 0.0) ++count;
  }
  return count;
}

ExtremeEigenvalues extreme_eigenvalues(const TridiagonalMatrix& t, int k) {
  const int n = t.size();
  if (k < 0 || k > n) throw std::invalid_argument("extreme_eigenvalues: need 0 <= k <= N");
  const auto [lo, hi] = gershgorin(t);
  ExtremeEigenvalues out;
  for (int j = 0; j < k; ++j) out.smallest.push_back(bisect_eigenvalue(t, j, lo, hi));
  for (int j = 0; j < k; ++j) out.largest.push_back(bisect_eigenvalue(t, n - 1 - j, lo, hi));
  return out;
}

Eigen::VectorXd tridiagonal_eigenvalues(const TridiagonalMatrix& t) {
  if (t.size() == 1) return t.diagonal;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(t.diagonal, t.offdiagonal, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double semicircle_density(double x) { return std::abs(x) >= 2.0 ? 0.0 : std::sqrt(4.0 - x * x) / (2.0 * kPi); }

double semicircle_cdf(double x) {
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return 1.0;
  return 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * kPi) + std::asin(x / 2.0) / kPi;
}

double semicircle_quantile(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("semicircle_quantile: p outside [0, 1]");
  if (p == 0.0) return -2.0;
  if (p == 1.0) return 2.0;
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve([p](double x) { return semicircle_cdf(x) - p; }, -2.0, 2.0,
                                                   -p, 1.0 - p, boost::math::tools::eps_tolerance<double>(50),
                                                   iters);
  return 0.5 * (r.first + r.second);
}

Eigen::VectorXd semicircle_classical_locations(int n) {
  Eigen::VectorXd g(n);
  for (int k = 0; k < n; ++k) g[k] = semicircle_quantile((k + 0.5) / n);
  // Exact symmetry.
  for (int k = 0; k < n / 2; ++k) {
    const double s = 0.5 * (g[n - 1 - k] - g[k]);
    g[k] = -s;
    g[n - 1 - k] = s;
  }
  if (n % 2 == 1) g[n / 2] = 0.0;
  return g;
}

std::vector<double> gbe_edge_samples(int n, double beta, long n_samples, std::uint64_t seed,
                                     const GbeEdgeOptions& o) {
  if (n_samples < 1) throw std::invalid_argument("gbe_edge_samples: need at least one sample");
  if (o.k < 1 || o.k > n) throw std::invalid_argument("gbe_edge_samples: k must lie in [1, N]");
  const double N = n;
  const int idx = o.side == EdgeSide::Left ? o.k - 1 : n - o.k;
  double ref = 0.0;
  if (o.reference == EdgeReference::Edge) {
    ref = o.side == EdgeSide::Left ? -2.0 : 2.0;
  } else {
    ref = semicircle_quantile((idx + 0.5) / N);
  }
  const double pre = std::pow(N, 2.0 / 3.0) * std::cbrt(static_cast<double>(o.k));
  std::vector<double> out(static_cast<std::size_t>(n_samples));
  parallel_for(n_samples, o.workers, [&](long s) {
    const auto t = sample_gbe(n, beta, derive_seed(seed, static_cast<std::uint64_t>(s)));
    const auto ex = extreme_eigenvalues(t, o.k);
    const double lam = o.side == EdgeSide::Left ? ex.smallest.back() : ex.largest.back();
    // x = √N λ, so x/N = λ/√N.
    out[static_cast<std::size_t>(s)] = pre * (lam / std::sqrt(N) - ref);
  });
  return out;
}

std::vector<double> gbe_pooled_spectrum(int n, double beta, long n_matrices, std::uint64_t seed) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n * n_matrices));
  for (long s = 0; s < n_matrices; ++s) {
    const auto ev = tridiagonal_eigenvalues(sample_gbe(n, beta, derive_seed(seed, static_cast<std::uint64_t>(s))));
    for (int i = 0; i < n; ++i) out.push_back(ev[i] / std::sqrt(static_cast<double>(n)));
  }
  return out;
}

}  // namespace dbeta
