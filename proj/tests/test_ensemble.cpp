#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "dbeta/ensemble.hpp"
#include "dbeta/special.hpp"

using namespace dbeta;

namespace {

// Z(N, M) = 2^{N(M−N+1)} (M!)^N Π_{j<N} j!/(M−j)!, in logs.
double log_krawtchouk_partition(int n, long m) {
  double z = n * (m - n + 1) * std::log(2.0) + n * std::lgamma(m + 1.0);
  for (int j = 0; j < n; ++j) z += std::lgamma(j + 1.0) - std::lgamma(m - j + 1.0);
  return z;
}

Configuration at_positions(double theta, std::vector<double> pos) {
  const auto p = EnsembleParams::jack(static_cast<int>(pos.size()), theta);
  return configuration_from_positions(p, pos);
}

}  // namespace

TEST_CASE("parameters and lattice") {
  CHECK_THROWS(EnsembleParams{0.0, 1}.validate());
  CHECK_THROWS(EnsembleParams{1.0, 0}.validate());
  CHECK_THROWS(EnsembleParams{0.5, 2, 0.0, 2.5}.validate());
  CHECK_NOTHROW(EnsembleParams{0.5, 2, 0.0, 3.0}.validate());
  const auto k = EnsembleParams::krawtchouk(3, 7);
  CHECK(k.position(0, k.lambda_min()) == 0.0);
  CHECK(k.position(2, k.lambda_max()) == 7.0);
  const auto j = EnsembleParams::jack(4, 0.5);
  CHECK(j.position(0, j.lambda_min()) == 0.0);
  CHECK_THROWS(Configuration(k, {1, 3, 2}));
  CHECK_THROWS(Configuration(k, {0, 1, 2}));
  CHECK_THROWS(Configuration(k, {1, 2}));
}

TEST_CASE("log_interaction examples") {
  CHECK(log_interaction(at_positions(1.0, {0, 2})) == doctest::Approx(2.0 * std::log(2.0)));
  // Gap 3 at θ = 1/2 only occurs between particles of opposite parity of index.
  CHECK(log_interaction(at_positions(0.5, {0, 1.5, 3})) ==
        doctest::Approx(std::log(1.5) + std::log(1.5) + std::log(3.0)));
  CHECK(log_pair_interaction(3.0, 0.5) == doctest::Approx(std::log(3.0)));
  const double oracle = std::lgamma(4.0) + std::lgamma(5.0) - std::lgamma(3.0) - std::lgamma(2.0);
  CHECK(log_interaction(at_positions(2.0, {0, 3})) == doctest::Approx(oracle).epsilon(1e-14));
  CHECK(oracle == doctest::Approx(std::log(72.0)).epsilon(1e-14));
}

TEST_CASE("log_interaction equals Vandermonde powers") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> pos{0.0};
    for (int i = 1; i < 6; ++i) pos.push_back(pos.back() + 1.0 + static_cast<double>(rng() % 200000));
    double vdm = 0.0;
    for (std::size_t i = 0; i < pos.size(); ++i)
      for (std::size_t j = i + 1; j < pos.size(); ++j) vdm += std::log(pos[j] - pos[i]);
    CHECK(std::exp(log_interaction(at_positions(1.0, pos)) - 2.0 * vdm) == doctest::Approx(1.0).epsilon(1e-12));
    std::vector<double> half(pos);
    for (std::size_t i = 0; i < half.size(); ++i) half[i] = pos[i] + 0.5 * static_cast<double>(i);
    double vh = 0.0;
    for (std::size_t i = 0; i < half.size(); ++i)
      for (std::size_t j = i + 1; j < half.size(); ++j) vh += std::log(half[j] - half[i]);
    CHECK(std::exp(log_interaction(at_positions(0.5, half)) - vh) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("log_density_unnormalized") {
  const WeightModel w(Krawtchouk{3});
  const auto p = EnsembleParams::krawtchouk(2, 3);
  CHECK(log_density_unnormalized(configuration_from_positions(p, {0, 2}), w) == doctest::Approx(std::log(12.0)));
  const auto p1 = EnsembleParams::krawtchouk(1, 3);
  CHECK(log_density_unnormalized(configuration_from_positions(p1, {2}), w) == doctest::Approx(std::log(3.0)));
  const WeightModel small(Krawtchouk{2});
  CHECK(log_density_unnormalized(configuration_from_positions(p, {0, 3}), small) == kNegInf);
}

TEST_CASE("enumeration") {
  const auto p = EnsembleParams::krawtchouk(2, 3);
  const auto all = enumerate_configurations(p, lambda_box_for_positions(p, {0, 3}));
  REQUIRE(all.size() == 6);
  const std::vector<std::vector<double>> want{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  for (std::size_t k = 0; k < 6; ++k) {
    CHECK(all[k].position(0) == want[k][0]);
    CHECK(all[k].position(1) == want[k][1]);
  }
  CHECK(std::is_sorted(all.begin(), all.end()));

  const auto p1 = EnsembleParams::krawtchouk(1, 9);
  CHECK(enumerate_configurations(p1, lambda_box_for_positions(p1, {0, 9})).size() == 10);

  const EnsembleParams t2{2.0, 2, 0.0, std::numeric_limits<double>::infinity()};
  CHECK(enumerate_configurations(t2, LambdaBox{1, 2}).size() == 3);

  const auto big = EnsembleParams::krawtchouk(10, 60);
  try {
    enumerate_configurations(big, lambda_box_for_positions(big, {0, 60}));
    FAIL("cap not enforced");
  } catch (const EnumerationCapExceeded& e) {
    CHECK(e.count() == doctest::Approx(std::exp(log_binomial(61, 10))).epsilon(1e-9));
  }
}

TEST_CASE("exact distribution and Krawtchouk partition") {
  const std::pair<int, long> cases[] = {{1, 2}, {2, 3}, {2, 4}, {3, 5}, {3, 6}, {4, 9}};
  for (auto [n, m] : cases) {
    const auto t = exact_distribution(EnsembleParams::krawtchouk(n, m), WeightModel(Krawtchouk{m}));
    CHECK(std::exp(t.log_partition - log_krawtchouk_partition(n, m)) == doctest::Approx(1.0).epsilon(1e-12));
    double s = 0.0;
    for (double q : t.probabilities) s += q;
    CHECK(std::abs(s - 1.0) <= 1e-12);
  }
  const auto t12 = exact_distribution(EnsembleParams::krawtchouk(1, 2), WeightModel(Krawtchouk{2}));
  CHECK(t12.partition() == doctest::Approx(4.0));
  CHECK(t12.probabilities[1] == doctest::Approx(0.5));
  CHECK(exact_distribution(EnsembleParams::krawtchouk(2, 3), WeightModel(Krawtchouk{3})).partition() ==
        doctest::Approx(48.0));
  const auto one = exact_distribution(EnsembleParams::krawtchouk(1, 0), WeightModel(Krawtchouk{0}));
  CHECK(one.probabilities.size() == 1);
  CHECK(one.probabilities[0] == 1.0);
}

TEST_CASE("stieltjes_GN") {
  using C = std::complex<double>;
  const auto one = at_positions(1.0, {0});
  CHECK(std::abs(stieltjes_GN(one, C(0, 1)) - C(0, -1)) < 1e-15);
  const auto two = configuration_from_positions(EnsembleParams::krawtchouk(2, 2), {0, 2});
  CHECK(std::abs(stieltjes_GN(two, C(2, 0)) - 0.75) < 1e-15);
  CHECK_THROWS_AS(stieltjes_GN(two, C(1, 0)), std::domain_error);
  CHECK(std::abs(stieltjes_GN(two, C(1e7, 0)) * 1e7 - 1.0) < 1e-6);
  const C z(0.3, 0.7);
  CHECK(std::abs(stieltjes_GN(two, std::conj(z)) - std::conj(stieltjes_GN(two, z))) < 1e-15);
}

TEST_CASE("Im G_N bound at mesoscopic scale") {
  std::mt19937_64 rng(11);
  for (double theta : {0.5, 1.0, 2.0}) {
    const int n = 200;
    const double eta = std::log(static_cast<double>(n)) / n;
    const double bound = 2.0 + 2.0 * kPi / theta;
    std::vector<double> packed(n);
    for (int i = 0; i < n; ++i) packed[i] = theta * i;
    std::vector<double> spread(n, 0.0);
    double x = 0.0;
    for (int i = 1; i < n; ++i) spread[i] = x += theta + static_cast<double>(rng() % 4);
    for (const auto& pos : {packed, spread}) {
      const auto c = at_positions(theta, pos);
      for (double re = -0.5; re < pos.back() / n + 0.5; re += 0.01) {
        const auto g = stieltjes_GN(c, {re, eta});
        CHECK(g.imag() < 0.0);
        CHECK(std::abs(g.imag()) <= bound);
      }
    }
  }
}

TEST_CASE("holes and particles") {
  const auto c = configuration_from_positions(EnsembleParams::krawtchouk(2, 3), {0, 2});
  CHECK(holes_of(c, 3).holes == std::vector<long>{1, 3});
  const auto c4 = configuration_from_positions(EnsembleParams::krawtchouk(2, 4), {1, 3});
  CHECK(holes_of(c4, 4).holes == std::vector<long>{0, 2, 4});
  const auto full = configuration_from_positions(EnsembleParams::krawtchouk(3, 2), {0, 1, 2});
  CHECK_THROWS_AS(holes_of(full, 2), std::invalid_argument);
  CHECK_THROWS_AS(holes_of(at_positions(0.5, {0, 1}), 3), std::invalid_argument);
  for (int n = 1; n <= 4; ++n) {
    const auto p = EnsembleParams::krawtchouk(n, 7);
    for (const auto& cfg : enumerate_configurations(p, lambda_box_for_positions(p, {0, 7}))) {
      const auto h = holes_of(cfg, 7);
      CHECK(particles_of(h) == cfg);
      const auto back = holes_of(particles_of(h), 7);
      CHECK(back.holes == h.holes);
    }
  }
}

TEST_CASE("dual weight") {
  const WeightModel w(Krawtchouk{2});
  CHECK(dual_log_weight(1, w, 2) == doctest::Approx(-std::log(2.0)));
  CHECK(dual_log_weight(0, w, 2) == doctest::Approx(-2.0 * std::log(2.0)));
  CHECK_THROWS(dual_log_weight(3, w, 2));
  // Direct product over k ≠ x as the oracle.
  const WeightModel w7(Krawtchouk{7});
  for (long x = 0; x <= 7; ++x) {
    double s = 0.0;
    for (long k = 0; k <= 7; ++k)
      if (k != x) s += std::log(std::abs(static_cast<double>(x - k)));
    CHECK(dual_log_weight(x, w7, 7) == doctest::Approx(-w7.log_w(x) - 2.0 * s).epsilon(1e-13));
  }
}

TEST_CASE("hole pushforward is the dual ensemble") {
  const std::pair<int, long> cases[] = {{2, 3}, {3, 5}, {2, 6}, {4, 7}};
  for (auto [n, m] : cases) {
    const WeightModel w(Krawtchouk{m});
    const auto table = exact_distribution(EnsembleParams::krawtchouk(n, m), w);
    std::map<std::vector<long>, double> push;
    for (std::size_t k = 0; k < table.configurations.size(); ++k) {
      push[holes_of(table.configurations[k], m).holes] += table.probabilities[k];
    }
    const int nh = static_cast<int>(m - n + 1);
    const auto dual = exact_distribution(EnsembleParams::krawtchouk(nh, m), dual_weight(w, m));
    REQUIRE(dual.configurations.size() == push.size());
    for (std::size_t k = 0; k < dual.configurations.size(); ++k) {
      std::vector<long> key;
      for (int i = 0; i < nh; ++i) key.push_back(static_cast<long>(dual.configurations[k].position(i)));
      REQUIRE(push.count(key) == 1);
      CHECK(dual.probabilities[k] == doctest::Approx(push[key]).epsilon(1e-10));
    }
  }
}

TEST_CASE("dual empirical sites") {
  const auto c = configuration_from_positions(EnsembleParams::krawtchouk(2, 5), {1, 4});
  CHECK(dual_empirical_sites(c) == std::vector<double>{0, 2, 3, 5});
}
