#include "dbeta/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dbeta/special.hpp"

namespace dbeta {
namespace {

using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;
constexpr unsigned kMaxDepth = 18;

double integrate(const std::function<double(double)>& f, double lo, double hi, double tol) {
  if (hi <= lo) return 0.0;
  double error = 0.0;
  double l1 = 0.0;
  const double value = Rule::integrate(f, lo, hi, kMaxDepth, tol, &error, &l1);
  if (!std::isfinite(value) || error > 100.0 * tol * std::max(1.0, l1)) {
    throw QuadratureFailure("pv_hilbert_numeric: quadrature error " + std::to_string(error) +
                            " exceeds tolerance");
  }
  return value;
}

// Root of (x−a)(x−b) on the branch asymptotic to x.
double outer_root(double a, double b, double x) {
  const double r = std::sqrt((x - a) * (x - b));
  return x > b ? r : -r;
}

}  // namespace

HilbertIdentities pv_hilbert_identities(double a, double b, double x) {
  if (!(a < b)) throw std::invalid_argument("pv_hilbert_identities: need a < b");
  const double mid = 0.5 * (a + b);
  if (x >= a && x <= b) return {0.0, kPi * (x - mid)};
  const double root = outer_root(a, b, x);
  return {kPi / root, kPi * (x - mid) - kPi * root};
}

double pv_hilbert_numeric(const std::function<double(double)>& u, EndpointWeight weight, double a, double b,
                          double x, double tol) {
  if (!(a < b)) throw std::invalid_argument("pv_hilbert_numeric: need a < b");
  const double c = 0.5 * (a + b);
  const double r = 0.5 * (b - a);
  // ω(y) dy = m(t) dt up to sign, with y(t) = c + r cos t.
  auto m = [&](double t) {
    switch (weight) {
      case EndpointWeight::None:
        return r * std::sin(t);
      case EndpointWeight::InverseSqrt:
        return 1.0;
      case EndpointWeight::Sqrt: {
        const double s = r * std::sin(t);
        return s * s;
      }
    }
    return 1.0;
  };
  // Keep y strictly inside (a, b) so integrable endpoint singularities of u
  // are never evaluated.
  const double y_lo = std::nextafter(a, b), y_hi = std::nextafter(b, a);
  auto F = [&](double t) { return u(std::clamp(c + r * std::cos(t), y_lo, y_hi)) * m(t); };
  const double ct0 = (x - c) / r;
  if (std::abs(ct0) > 1.0) {
    return integrate([&](double t) { return F(t) / (x - c - r * std::cos(t)); }, 0.0, kPi, tol);
  }
  // The PV of ∫_0^π dt / (cos t0 − cos t) vanishes, so subtracting F(t0)
  // leaves a regular integrand.
  const double t0 = std::acos(ct0);
  const double F0 = F(t0);
  auto g = [&](double t) {
    const double den = ct0 - std::cos(t);
    if (den == 0.0) return 0.0;
    return (F(t) - F0) / den;
  };
  return (integrate(g, 0.0, t0, tol) + integrate(g, t0, kPi, tol)) / r;
}

double inverse_hilbert(const std::function<double(double)>& g, double a, double b, double total_mass, double x,
                       double tol) {
  if (!(x > a && x < b)) throw std::domain_error("inverse_hilbert: x must lie inside (a, b)");
  const double root = std::sqrt((x - a) * (b - x));
  const double pv = -pv_hilbert_numeric(g, EndpointWeight::Sqrt, a, b, x, tol);
  return (pv / kPi + total_mass) / (kPi * root);
}

}  // namespace dbeta
