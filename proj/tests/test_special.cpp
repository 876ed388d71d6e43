#include <doctest.h>

#include <cmath>
#include <initializer_list>

#include "dbeta/special.hpp"

using namespace dbeta;

TEST_CASE("log_gamma_ratio agrees with lgamma differences") {
  const double xs[] = {0.3, 1.0, 2.5, 11.9, 12.1, 40.0, 700.25, 1.0e4, 3.3e5};
  const double shifts[][2] = {{0.5, 0.0}, {1.0, 0.5}, {2.0, -0.5}, {0.25, 0.75}, {3.0, 0.0}, {1.5, 1.5}};
  for (double x : xs) {
    for (const auto& s : shifts) {
      const double a = s[0], b = s[1];
      if (x + b <= 0.0) continue;
      // Extended-precision oracle: double lgamma differences cancel badly at large x.
      const long double lx = x;
      const double want = static_cast<double>(std::lgamma(lx + a) - std::lgamma(lx + b));
      CHECK(log_gamma_ratio(x, a, b) == doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("pair interaction reduces to Coulomb exponents") {
  for (double d = 1.0; d <= 1.0e6; d *= 3.7) {
    const double g = std::round(d);
    CHECK(log_pair_interaction(g, 1.0) == doctest::Approx(2.0 * std::log(g)).epsilon(1e-13));
  }
  for (double g = 0.5; g < 2.0e5; g = g * 2.0 + 0.5) {
    CHECK(log_pair_interaction(g, 0.5) == doctest::Approx(std::log(g)).epsilon(1e-13));
  }
  // θ = 2, d = 3: Γ(4)Γ(5)/(Γ(3)Γ(2)) = 6·24/2.
  const double oracle = std::log(std::tgamma(4.0) * std::tgamma(5.0) / (std::tgamma(3.0) * std::tgamma(2.0)));
  CHECK(log_pair_interaction(3.0, 2.0) == doctest::Approx(oracle).epsilon(1e-14));
  CHECK(oracle == doctest::Approx(std::log(72.0)).epsilon(1e-14));
}

TEST_CASE("pair_step_ratio matches consecutive pair factors") {
  for (double theta : {0.5, 1.0, 1.7, 3.0}) {
    for (double e = theta; e < 300.0; e = e * 1.9 + 1.0) {
      const double want = std::exp(log_pair_interaction(e + 1.0, theta) - log_pair_interaction(e, theta));
      CHECK(pair_step_ratio(e, theta) == doctest::Approx(want).epsilon(1e-11));
    }
  }
}

TEST_CASE("log_binomial") {
  CHECK(log_binomial(4, 2) == doctest::Approx(std::log(6.0)));
  CHECK(log_binomial(4, -1) == kNegInf);
  CHECK(log_binomial(4, 5) == kNegInf);
  for (int k = 0; k <= 30; ++k) CHECK(log_binomial(30, k) == log_binomial(30, 30 - k));
}
