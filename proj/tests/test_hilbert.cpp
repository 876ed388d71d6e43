#include <doctest.h>

#include <cmath>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "dbeta/hilbert.hpp"
#include "dbeta/special.hpp"

using namespace dbeta;

namespace {

// Direct quadrature of the original integrand, valid off [a, b].
double direct(const std::function<double(double)>& f, double a, double b, double x) {
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate([&](double y) { return f(y) / (x - y); }, a, b);
}

}  // namespace

TEST_CASE("printed identities") {
  CHECK(pv_hilbert_identities(0.0, 1.0, 0.3).inverse_sqrt_kernel == 0.0);
  CHECK(pv_hilbert_identities(0.0, 1.0, 2.0).inverse_sqrt_kernel == doctest::Approx(kPi / std::sqrt(2.0)));
  CHECK(pv_hilbert_identities(0.0, 1.0, 0.3).sqrt_kernel == doctest::Approx(kPi * (0.3 - 0.5)));
  CHECK(pv_hilbert_identities(0.0, 1.0, -1.0).inverse_sqrt_kernel == doctest::Approx(-kPi / std::sqrt(2.0)));
}

TEST_CASE("closed forms against quadrature, every branch") {
  const double a = -0.7, b = 1.9;
  const auto one = [](double) { return 1.0; };
  for (int k = 0; k < 10; ++k) {
    const double inside = a + (b - a) * (k + 0.5) / 10.0;
    const double left = a - 0.05 - 0.4 * k;
    const double right = b + 0.05 + 0.4 * k;
    for (double x : {inside, left, right}) {
      const auto want = pv_hilbert_identities(a, b, x);
      CHECK(std::abs(pv_hilbert_numeric(one, EndpointWeight::InverseSqrt, a, b, x) - want.inverse_sqrt_kernel) <=
            1e-6);
      CHECK(std::abs(pv_hilbert_numeric(one, EndpointWeight::Sqrt, a, b, x) - want.sqrt_kernel) <= 1e-6);
    }
    for (double x : {left, right}) {
      const auto want = pv_hilbert_identities(a, b, x);
      const double inv = direct([&](double y) { return 1.0 / std::sqrt((y - a) * (b - y)); }, a, b, x);
      const double sq = direct([&](double y) { return std::sqrt((y - a) * (b - y)); }, a, b, x);
      CHECK(std::abs(inv - want.inverse_sqrt_kernel) <= 1e-6);
      CHECK(std::abs(sq - want.sqrt_kernel) <= 1e-6);
    }
  }
}

TEST_CASE("numeric PV of a smooth function") {
  // PV∫_0^1 y/(x − y) dy = −1 + x ln(x/(1 − x)).
  for (double x : {0.1, 0.37, 0.5, 0.9}) {
    const double want = -1.0 + x * std::log(x / (1.0 - x));
    CHECK(pv_hilbert_numeric([](double y) { return y; }, EndpointWeight::None, 0.0, 1.0, x) ==
          doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("inverse Hilbert round trip") {
  const auto g = [](double x) { return kPi * (x - 0.5); };
  for (double x = 0.02; x < 1.0; x += 0.05) {
    CHECK(std::abs(inverse_hilbert(g, 0.0, 1.0, kPi / 8.0, x) - std::sqrt(x * (1.0 - x))) <= 1e-4);
  }
  CHECK_THROWS(inverse_hilbert(g, 0.0, 1.0, 1.0, 1.5));
}

TEST_CASE("inverse Hilbert recovers the Jack band density") {
  // On [A, B] the saturated part contributes ln(x/(x − A))/θ to the transform;
  // the band density solves 2θ PV∫ρ/(x−y) = V'(x) − 2 ln(x/(x−A)).
  const double theta = 1.0, c = 6.0;
  const double r = 2.0 * std::sqrt(theta) / c;
  const double A = theta - r, B = theta + r;
  const auto g = [&](double x) {
    const double vprime = 2.0 * std::log(x) - std::log(theta / (c * c));
    return (vprime - 2.0 * std::log(x / (x - A))) / (2.0 * theta);
  };
  for (double x : {0.8, 1.0, 1.2}) {
    const double want = 2.0 / (kPi * theta) * std::atan(std::sqrt((B - x) / (x - A)));
    CHECK(inverse_hilbert(g, A, B, 1.0 - A / theta, x) == doctest::Approx(want).epsilon(1e-6));
  }
}
