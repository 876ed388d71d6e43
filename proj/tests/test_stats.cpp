#include <doctest.h>

#include <cmath>
#include <random>

#include "dbeta/equilibrium.hpp"
#include "dbeta/sampler.hpp"
#include "dbeta/stats.hpp"

using namespace dbeta;

TEST_CASE("ECDF") {
  const Ecdf f({3.0, 1.0, 2.0, 2.0});
  CHECK(f(0.5) == 0.0);
  CHECK(f(1.0) == 0.25);
  CHECK(f(2.0) == 0.75);
  CHECK(f(2.5) == 0.75);
  CHECK(f(3.0) == 1.0);
  const auto st = f.steps();
  REQUIRE(st.size() == 3);
  CHECK(st[1] == std::pair{2.0, 0.75});
  CHECK_THROWS(Ecdf({}));
}

TEST_CASE("two-sample KS") {
  CHECK(ks_distance({1.0, 2.0, 3.0}, {3.0, 1.0, 2.0}).distance == 0.0);
  CHECK(ks_distance({0.0, 1.0}, {5.0, 6.0}).distance == 1.0);
  CHECK(ks_distance({0.0, 1.0}, {0.5}).distance == 0.5);
  CHECK_THROWS(ks_distance({}, {1.0}));

  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> a(300), b(200);
  for (auto& x : a) x = g(rng);
  for (auto& x : b) x = 0.3 + g(rng);
  const double d = ks_distance(a, b).distance;
  CHECK(ks_distance(b, a).distance == d);
  std::vector<double> ea, eb;
  for (double x : a) ea.push_back(std::exp(x));
  for (double x : b) eb.push_back(std::exp(x));
  CHECK(ks_distance(ea, eb).distance == d);
  // Supremum is attained at a data point: compare with brute force.
  const Ecdf fa(a), fb(b);
  double brute = 0.0;
  for (double x : a) brute = std::max(brute, std::abs(fa(x) - fb(x)));
  for (double x : b) brute = std::max(brute, std::abs(fa(x) - fb(x)));
  CHECK(d == brute);
}

TEST_CASE("one-sample KS") {
  const auto uniform = [](double x) { return std::clamp(x, 0.0, 1.0); };
  CHECK(ks_one_sample({0.5}, uniform).distance == 0.5);
  CHECK(ks_one_sample({0.25, 0.75}, uniform).distance == doctest::Approx(0.25));
}

TEST_CASE("rigidity profile") {
  const int n = 40;
  const double m = 4.0;
  const auto mu = tabulate_measure([m](double x) { return krawtchouk_density(m, x); }, 1.0, {0.0, m}, 2000);
  const auto gam = classical_locations(mu, n).gammas;
  const auto params = EnsembleParams::krawtchouk(n, 4 * n);
  // Place particles at rounded classical positions (distinct for m = 4).
  std::vector<double> pos;
  for (int i = 0; i < n; ++i) pos.push_back(std::round(n * gam[i]));
  const auto c = configuration_from_positions(params, pos);
  const auto p = rigidity_profile({c}, gam);
  CHECK(p.indices.front() == 2);
  CHECK(p.indices.back() == 38);
  for (std::size_t t = 0; t < p.indices.size(); ++t) {
    const int i = p.indices[t];
    CHECK(p.median[t] <= std::pow(n, 2.0 / 3.0) * std::cbrt(std::min(i, n - i + 1)) * 0.5 / n + 1e-12);
  }
  CHECK(p.fraction_below(1e9) == 1.0);
  CHECK_THROWS(rigidity_profile({c}, Eigen::VectorXd::Zero(3)));
}

TEST_CASE("rescale_edge is affine in the edge particle") {
  const int n = 10;
  const auto params = EnsembleParams::krawtchouk(n, 40);
  Eigen::VectorXd gam(n);
  for (int i = 0; i < n; ++i) gam[i] = (2.0 * i + 3.0) / n;
  std::vector<double> pos;
  for (int i = 0; i < n; ++i) pos.push_back(2.0 * i + 3.0);
  const auto at = configuration_from_positions(params, pos);
  CHECK(rescale_edge({at}, gam, 1.7, 1, EdgeSide::Left).values[0] == doctest::Approx(0.0));
  CHECK(rescale_edge({at}, gam, 1.7, 2, EdgeSide::Right).values[0] == doctest::Approx(0.0));

  auto up = pos;
  up[1] += 1.0;
  const auto shifted = configuration_from_positions(params, up);
  const double s = 1.7;
  const double step = std::pow(n, 2.0 / 3.0) * std::cbrt(2.0) * std::pow(s, 2.0 / 3.0) / n;
  const auto e = rescale_edge({at, shifted}, gam, s, std::vector<int>{1, 2}, EdgeSide::Left);
  CHECK(e[1].values[1] - e[1].values[0] == doctest::Approx(step));
  CHECK(e[0].values[1] == e[0].values[0]);
  // Right side: k = 1 is the top particle.
  auto top = pos;
  top[n - 1] += 1.0;
  const auto r = rescale_edge({configuration_from_positions(params, top)}, gam, s, 1, EdgeSide::Right);
  CHECK(r.values[0] == doctest::Approx(std::pow(n, 2.0 / 3.0) * std::pow(s, 2.0 / 3.0) / n));
  CHECK_THROWS(rescale_edge({at}, gam, 0.0, 1, EdgeSide::Left));
}

TEST_CASE("gap statistics respect the lattice floor") {
  const int n = 12;
  const auto params = EnsembleParams::krawtchouk(n, 48);
  const WeightModel w{Krawtchouk{48}};
  const auto batch = run_chain(params, w, ChainSpec::with_defaults(n, 500, 8));
  const auto g = gap_statistics(batch.configurations, 1);
  CHECK(g.L == doctest::Approx(std::pow(12.0, 0.25)));
  CHECK(g.floor == doctest::Approx(std::cbrt(g.L / 12.0)));
  for (double v : g.values) CHECK(v >= g.floor - 1e-12);
  CHECK(g.fraction_below(g.floor) == 0.0);
  const Ecdf f(g.values);
  double prev = 0.0;
  for (const auto& [x, y] : f.steps()) {
    CHECK(y >= prev);
    CHECK(f(x) == y);
    prev = y;
  }
  CHECK_THROWS(gap_statistics(batch.configurations, n));
}
