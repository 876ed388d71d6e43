#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "dbeta/special.hpp"
#include "dbeta/weights.hpp"

using namespace dbeta;

namespace {

WeightModel square_potential(long n) {
  ConvexPotential p;
  p.kappa = 1.0;
  p.n_particles = n;
  p.V = [](double u) { return u * u; };
  p.box = {-100, 100};
  return WeightModel(p);
}

}  // namespace

TEST_CASE("log_w examples") {
  CHECK(WeightModel(Krawtchouk{4}).log_w(2) == doctest::Approx(std::log(6.0)));
  CHECK(WeightModel(PoissonizedJack{1.0, 1.0, 6.0}).log_w(0) == doctest::Approx(0.0));
  CHECK(square_potential(10).log_w(10) == doctest::Approx(-10.0));
  CHECK(WeightModel(Krawtchouk{4}).log_w(5) == kNegInf);
  CHECK(WeightModel(PoissonizedJack{1.0, 1.0, 6.0}).log_w(-1) == kNegInf);
}

TEST_CASE("psi_ratio examples") {
  const auto k = WeightModel(Krawtchouk{5}).psi_ratio(2);
  CHECK(k.plus == 4.0);
  CHECK(k.minus == 2.0);
  CHECK(std::exp(log_binomial(5, 2) - log_binomial(5, 1)) == doctest::Approx(k.plus / k.minus));

  // w(2)/w(1) from lgamma directly: (θM)^x / (x! Γ(x+θ)) at θ = 1, M = 4.
  const WeightModel jack(PoissonizedJack{4.0, 1.0, 6.0});
  const auto j = jack.psi_ratio(2);
  const double oracle = std::exp((2 * std::log(4.0) - std::lgamma(3.0) - std::lgamma(3.0)) -
                                 (1 * std::log(4.0) - std::lgamma(2.0) - std::lgamma(2.0)));
  CHECK(j.plus == 4.0);
  CHECK(j.minus == 4.0);
  CHECK(oracle == doctest::Approx(1.0));
  CHECK(j.plus / j.minus == doctest::Approx(oracle));

  const auto c = square_potential(2).psi_ratio(1);
  CHECK(c.plus == doctest::Approx(std::exp(-0.5)));
  CHECK(c.minus == 1.0);

  CHECK(WeightModel(Krawtchouk{5}).psi_ratio(0).vanishing_minus());
  CHECK(WeightModel(Krawtchouk{5}).psi_ratio(6).vanishing_plus());
}

TEST_CASE("support boxes") {
  CHECK(WeightModel(Krawtchouk{7}).support_box().lo == 0);
  CHECK(WeightModel(Krawtchouk{7}).support_box().hi == 7);
  const auto jb = WeightModel(PoissonizedJack{100.0, 1.0, 5.5}).support_box();
  CHECK(jb.lo == 0);
  CHECK(jb.hi == 110);
  const auto tb = WeightModel(Tabulated{3, std::vector<double>(7, 0.0)}).support_box();
  CHECK(tb.lo == 3);
  CHECK(tb.hi == 9);
}

TEST_CASE("psi ratios telescope to weight ratios") {
  std::vector<WeightModel> models{WeightModel(Krawtchouk{60}), WeightModel(PoissonizedJack{30.0, 0.7, 7.0}),
                                  WeightModel(PoissonizedJack{30.0, 2.0, 8.0}), square_potential(20)};
  for (const auto& w : models) {
    const auto box = w.support_box();
    const long x0 = std::max(box.lo, -40L);
    const long x1 = std::min(box.hi, x0 + 80);
    double acc = 0.0;
    for (long x = x0 + 1; x <= x1; ++x) {
      const auto r = w.psi_ratio(x);
      acc += std::log(r.plus) - std::log(r.minus);
      const double want = w.log_w(x) - w.log_w(x0);
      CHECK(std::exp(acc - want) == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("Krawtchouk log_w is symmetric") {
  const WeightModel w(Krawtchouk{37});
  for (long x = 0; x <= 37; ++x) CHECK(w.log_w(x) == w.log_w(37 - x));
}

TEST_CASE("PoissonizedJack rejects small c") {
  CHECK_THROWS_AS(WeightModel(PoissonizedJack{4.0, 1.0, 5.0}), std::invalid_argument);
  CHECK_NOTHROW(WeightModel(PoissonizedJack{4.0, 1.0, 5.5}));
  CHECK_THROWS_AS(WeightModel(PoissonizedJack{4.0, 4.0, 10.0}), std::invalid_argument);
}

TEST_CASE("tabulated weights") {
  const char* path = "test_weights_tab.csv";
  {
    std::ofstream out(path);
    out << "x,log_w\n2,0.5\n3,-inf\n4,1.25\n";
  }
  const WeightModel w(load_tabulated_csv(path));
  std::remove(path);
  CHECK(w.log_w(2) == 0.5);
  CHECK(w.log_w(3) == kNegInf);
  CHECK(w.log_w(4) == 1.25);
  CHECK(w.log_w(5) == kNegInf);
  CHECK(w.psi_ratio(2).vanishing_minus());
  CHECK(describe_weight(w)["kind"] == "tabulated");
}
