#include <doctest.h>

#include <cmath>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dbeta/equilibrium.hpp"
#include "dbeta/special.hpp"

using namespace dbeta;
using C = std::complex<double>;

namespace {

std::vector<RegionKind> kinds(const EquilibriumMeasure& m) {
  std::vector<RegionKind> out;
  for (const auto& r : m.regions) out.push_back(r.kind);
  return out;
}

EquilibriumMeasure solve_krawtchouk(double m, int n, bool record = false) {
  SolverOptions o;
  o.grid_n = n;
  o.record_energy = record;
  return solve_constrained([m](double u) { return krawtchouk_potential(m, u); }, 1.0, {0.0, m}, o);
}

EquilibriumMeasure tabulated_krawtchouk(double m, int n) {
  return tabulate_measure([m](double x) { return krawtchouk_density(m, x); }, 1.0, {0.0, m}, n,
                          [m](double u) { return krawtchouk_potential(m, u); }, krawtchouk_edges(m));
}

EquilibriumMeasure tabulated_jack(double theta, double c, int n) {
  const auto j = jack_equilibrium(theta, c);
  return tabulate_measure([j](double x) { return j.density(x); }, theta, {0.0, 1.0 + theta}, n,
                          [=](double x) { return jack_potential(theta, c, x); }, std::pair{j.A, j.B});
}

double cell_mean(const std::function<double(double)>& f, double l, double r) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, l, r, 4, 1e-12) / (r - l);
}

}  // namespace

TEST_CASE("log kernel cell averages") {
  const double h = 0.01;
  CHECK(log_kernel_cell_average(0.0, h) == doctest::Approx(std::log(h) - 1.5));
  // Far cells: average ≈ ln|t| + h²·(−1/(6t²))... compare with a 2D product rule.
  for (double t : {0.01, 0.02, 0.05, 0.3}) {
    double s = 0.0;
    const int k = 400;
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        const double x = (i + 0.5) / k * h, y = t + (j + 0.5) / k * h;
        s += std::log(std::abs(x - y));
      }
    CHECK(log_kernel_cell_average(t, h) == doctest::Approx(s / (k * k)).epsilon(1e-4));
  }
}

TEST_CASE("krawtchouk closed-form density") {
  CHECK(krawtchouk_density(2.0, 1.0) == doctest::Approx(0.5));
  CHECK(krawtchouk_density(4.0, 2.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(krawtchouk_density(1.5, 0.02) == 1.0);
  CHECK(krawtchouk_density(1.5, 0.05) < 1.0);
  CHECK(krawtchouk_density(1.5, 0.05) > 0.5);
  CHECK(krawtchouk_density(4.0, 0.1) == 0.0);
  // Unit mass for several m.
  for (double m : {1.3, 1.5, 2.0, 3.0, 4.0, 7.0}) {
    const double mass = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [m](double x) { return krawtchouk_density(m, x); }, 0.0, m, 20, 1e-12);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("jack closed-form equilibrium") {
  const auto j = jack_equilibrium(1.0, 6.0);
  CHECK(j.A == doctest::Approx(2.0 / 3.0));
  CHECK(j.B == doctest::Approx(4.0 / 3.0));
  CHECK(j.density(0.5 * (j.A + j.B)) == doctest::Approx(0.5));
  const C z(1000.0, 0.0);
  CHECK(std::abs(j.G(z) * z - 1.0) < 1e-3);
  CHECK_THROWS(jack_equilibrium(0.1, 6.0));
  for (double theta : {0.5, 1.0, 2.0}) {
    const auto jj = jack_equilibrium(theta, 8.0);
    const double mass = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double x) { return jj.density(x); }, 0.0, jj.B, 20, 1e-12);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("solver: m = 2 is uniform") {
  const auto m = solve_krawtchouk(2.0, 400);
  for (int i = 0; i < m.size(); ++i) {
    if (m.grid[i] > 0.1 && m.grid[i] < 1.9) CHECK(std::abs(m.density[i] - 0.5) <= 2e-2);
  }
}

TEST_CASE("solver: m = 4 against the closed form") {
  const auto m = solve_krawtchouk(4.0, 1000, true);
  const auto [A, B] = krawtchouk_edges(4.0);
  CHECK(std::abs(m.A - A) <= 1e-2);
  CHECK(std::abs(m.B - B) <= 1e-2);
  for (int i = 0; i < m.size(); ++i) {
    const double x = m.grid[i];
    if (x > A + 0.05 * (B - A) && x < B - 0.05 * (B - A)) {
      CHECK(std::abs(m.density[i] - krawtchouk_density(4.0, x)) <= 2e-2);
    }
  }
  CHECK(kinds(m) == std::vector{RegionKind::Void, RegionKind::Band, RegionKind::Void});
  CHECK(m.kkt_residual <= 1e-5);
  CHECK(std::abs(m.mass() - 1.0) <= 1e-8);
  CHECK(m.density.minCoeff() >= 0.0);
  CHECK(m.density.maxCoeff() <= 1.0 + 1e-12);
  for (std::size_t k = 1; k < m.energy_trace.size(); ++k) CHECK(m.energy_trace[k] <= m.energy_trace[k - 1]);
  CHECK(kkt_residual(m) <= 1e-3);
  const auto again = solve_krawtchouk(4.0, 1000, true);
  CHECK(again.density == m.density);
}

TEST_CASE("solver: taxonomy for m = 1.5 and Jack") {
  const auto m = solve_krawtchouk(1.5, 1000);
  CHECK(kinds(m) == std::vector{RegionKind::Saturated, RegionKind::Band, RegionKind::Saturated});
  const auto [A, B] = krawtchouk_edges(1.5);
  CHECK(std::abs(m.A - A) <= 1e-2);
  CHECK(std::abs(m.B - B) <= 1e-2);

  SolverOptions o;
  o.grid_n = 1000;
  const auto jack = solve_constrained([](double x) { return jack_potential(1.0, 6.0, x); }, 1.0, {0.0, 2.0}, o);
  CHECK(kinds(jack) == std::vector{RegionKind::Saturated, RegionKind::Band, RegionKind::Void});
  CHECK(std::abs(jack.A - 2.0 / 3.0) <= 1e-2);
  CHECK(std::abs(jack.B - 4.0 / 3.0) <= 1e-2);

  const auto half = solve_constrained([](double x) { return jack_potential(0.5, 8.0, x); }, 0.5, {0.0, 1.5}, o);
  const auto jh = jack_equilibrium(0.5, 8.0);
  CHECK(std::abs(half.A - jh.A) <= 1e-2);
  CHECK(std::abs(half.B - jh.B) <= 1e-2);
}

TEST_CASE("solver rejects bad input") {
  SolverOptions o;
  o.grid_n = 32;
  CHECK_THROWS(solve_constrained([](double x) { return x * x; }, 1.0, {-2.0, 2.0}, o));
  o.grid_n = 128;
  CHECK_THROWS(solve_constrained([](double x) { return x * x; }, 1.0, {0.0, 0.5}, o));
  o.max_iter = 1;
  o.tol = 1e-14;
  CHECK_THROWS_AS(solve_constrained([](double x) { return x * x; }, 1.0, {-3.0, 3.0}, o), SolverNotConverged);
}

TEST_CASE("closed-form taxonomy") {
  CHECK(kinds(tabulated_krawtchouk(4.0, 2000)) == std::vector{RegionKind::Void, RegionKind::Band, RegionKind::Void});
  CHECK(kinds(tabulated_krawtchouk(3.0, 2000)) == std::vector{RegionKind::Void, RegionKind::Band, RegionKind::Void});
  CHECK(kinds(tabulated_krawtchouk(1.5, 2000)) ==
        std::vector{RegionKind::Saturated, RegionKind::Band, RegionKind::Saturated});
  CHECK(kinds(tabulated_jack(1.0, 6.0, 2000)) ==
        std::vector{RegionKind::Saturated, RegionKind::Band, RegionKind::Void});
  CHECK(kinds(tabulated_jack(2.0, 10.0, 2000)) ==
        std::vector{RegionKind::Saturated, RegionKind::Band, RegionKind::Void});
}

TEST_CASE("classical locations") {
  const auto u = tabulate_measure([](double) { return 0.5; }, 1.0, {0.0, 2.0}, 200);
  const auto g2 = classical_locations(u, 2);
  CHECK(g2.gammas[0] == doctest::Approx(0.5));
  CHECK(g2.gammas[1] == doctest::Approx(1.5));
  CHECK(classical_locations(u, 1).gammas[0] == doctest::Approx(1.0));

  const auto k = tabulated_krawtchouk(4.0, 2000);
  const auto g = classical_locations(k, 100).gammas;
  for (int i = 1; i < 100; ++i) CHECK(g[i] >= g[i - 1]);
  CHECK(g[0] > k.A);
  CHECK(g[99] < k.B);
  for (int i = 0; i < 100; ++i) CHECK(std::abs(k.cdf(g[i]) - (i + 0.5) / 100.0) <= 1e-8);
}

TEST_CASE("Stieltjes transforms") {
  const auto k = tabulated_krawtchouk(4.0, 2000);
  const C z(2.0, 1.0);
  CHECK(std::abs(stieltjes_Gmu(k, std::conj(z)) - std::conj(stieltjes_Gmu(k, z))) < 1e-14);
  CHECK_THROWS(stieltjes_Gmu(k, C(1.0, 0.0)));

  const auto d = dual_measure(k);
  CHECK(std::abs(d.mass() + k.mass() - 4.0) <= 1e-12);
  CHECK(d.mass() == doctest::Approx(3.0).epsilon(1e-6));
  for (const C w : {C(2.0, 0.5), C(-1.0, 0.1), C(5.0, -2.0)}) {
    const C flat = std::log((w - k.lo) / (w - k.hi));
    CHECK(std::abs(stieltjes_Gmu(k, w) + stieltjes_Gmu(d, w) - flat) <= 1e-6 * std::abs(flat));
  }

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> re(-1.0, 3.0), im(0.2, 1.5);
  const auto jack = jack_equilibrium(1.0, 6.0);
  const auto jt = tabulated_jack(1.0, 6.0, 4000);
  for (int k2 = 0; k2 < 20; ++k2) {
    const C w(re(rng), (k2 % 2 ? 1.0 : -1.0) * im(rng));
    CHECK(std::abs(stieltjes_Gmu(jt, w) - jack.G(w)) <= 1e-5);
  }
}

TEST_CASE("dual of m = 1.5 matches the hole density") {
  const double m = 1.5;
  const auto k = tabulated_krawtchouk(m, 3000);
  const auto d = dual_measure(k);
  const auto [A, B] = krawtchouk_edges(m);
  const double h = d.cell_width();
  for (int i = 0; i < d.size(); ++i) {
    const double l = d.lo + i * h;
    const double r = l + h;
    if ((l <= A && A <= r) || (l <= B && B <= r)) continue;
    const double want = cell_mean([m](double x) { return krawtchouk_dual_density(m, x); }, l, r);
    CHECK(std::abs(d.density[i] / (m - 1.0) - want) <= 1e-6);
  }
  CHECK(kinds(d) == std::vector{RegionKind::Void, RegionKind::Band, RegionKind::Void});
}

TEST_CASE("R and Q for the Jack measure") {
  const auto j = jack_equilibrium(1.0, 6.0);
  const auto G = [&](C z) { return j.G(z); };
  const auto phi_plus = [](C) { return C(1.0 / 36.0); };
  const auto phi_minus = [](C z) { return z * z; };
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> re(-2.0, 4.0), im(0.05, 2.0);
  for (int k = 0; k < 20; ++k) {
    const C z(re(rng), im(rng));
    const auto [R, Q] = RQ_mu(G, phi_plus, phi_minus, 1.0, z);
    const C want_q = z * std::sqrt(z - j.A) * std::sqrt(z - j.B);
    CHECK(std::abs(Q - want_q) <= 1e-6 * std::max(1.0, std::abs(want_q)));
    CHECK(std::abs(R - (z * z - z)) <= 1e-6 * std::max(1.0, std::abs(z * z)));
  }
}

TEST_CASE("Krawtchouk R is polynomial and Q/√ extends across the band") {
  const double m = 4.0;
  const auto k = tabulated_krawtchouk(m, 4000);
  const auto phi_plus = [m](C z) { return m - z; };
  const auto phi_minus = [](C z) { return z; };
  const auto [A, B] = krawtchouk_edges(m);
  for (double x : {1.0, 2.0, 3.0}) {
    const C above(x, 0.05), below(x, -0.05);
    const auto [Ra, Qa] = RQ_mu(k, phi_plus, phi_minus, above);
    const auto [Rb, Qb] = RQ_mu(k, phi_plus, phi_minus, below);
    const auto ha = Qa / (std::sqrt(above - A) * std::sqrt(above - B));
    const auto hb = Qb / (std::sqrt(below - A) * std::sqrt(below - B));
    CHECK(std::abs(ha - hb) < 0.05);
    CHECK(std::abs(Ra - Rb) < 0.05);
  }
}

TEST_CASE("edge coefficients") {
  const auto sq = tabulate_measure([](double x) { return std::sqrt(x) / kPi; }, 1.0, {0.0, 1.0}, 2000);
  CHECK(edge_coefficient(sq, EdgeSide::Left) == doctest::Approx(1.0).epsilon(1e-3));

  for (double c : {6.0, 9.0}) {
    const auto jt = tabulated_jack(1.0, c, 4000);
    CHECK(edge_coefficient(jt, EdgeSide::Right) == doctest::Approx(std::sqrt(c)).epsilon(0.02));
    CHECK_THROWS_AS(edge_coefficient(jt, EdgeSide::Left), std::invalid_argument);
  }
  const auto j2 = tabulated_jack(2.0, 10.0, 4000);
  CHECK(edge_coefficient(j2, EdgeSide::Right) == doctest::Approx(jack_equilibrium(2.0, 10.0).right_edge_coefficient()).epsilon(0.02));

  const auto [A, B] = krawtchouk_edges(4.0);
  const double s_expected = 2.0 * std::sqrt(B - A) / (4.0 - 2.0);
  CHECK(s_expected == doctest::Approx(std::sqrt(2.0 * std::sqrt(3.0))));
  CHECK(s_expected == doctest::Approx(1.861).epsilon(1e-3));
  CHECK(edge_coefficient(tabulated_krawtchouk(4.0, 4000), EdgeSide::Left) == doctest::Approx(s_expected).epsilon(0.02));
  CHECK(edge_coefficient(solve_krawtchouk(4.0, 2000), EdgeSide::Left) == doctest::Approx(s_expected).epsilon(0.02));
}
