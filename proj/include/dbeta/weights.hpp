#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace dbeta {

/// Closed integer interval [lo, hi] of particle positions.
struct PositionBox {
  long lo = 0;
  long hi = 0;
  bool contains(double x) const { return x >= static_cast<double>(lo) && x <= static_cast<double>(hi); }
  long size() const { return hi - lo + 1; }
};

/// Binomial weight C(M, x) on {0..M}; only meaningful at θ = 1.
struct Krawtchouk {
  long M = 0;
};

/// w(x) = exp(−κ N V(x/N)) restricted to a truncation box.
///
/// V is the caller's responsibility: it should be convex and real analytic.
/// The complex extension is optional and only used for Nekrasov checks.
struct ConvexPotential {
  double kappa = 1.0;
  long n_particles = 1;
  std::function<double(double)> V;
  PositionBox box;
  std::function<std::complex<double>(std::complex<double>)> V_complex;
};

/// Poissonized Jack weight (θM)^x / (Γ(x+1) Γ(x+θ)) on x ≥ 0.
struct PoissonizedJack {
  double M = 1.0;
  double theta = 1.0;
  double c = 6.0;
};

/// Arbitrary log-weights on the integers first .. first + size − 1.
struct Tabulated {
  long first = 0;
  std::vector<double> log_values;
};

struct PsiRatio {
  double plus = 1.0;
  double minus = 1.0;
  /// ψ⁻ = 0: w(x−1) = 0 while w(x) may be nonzero (left boundary of support).
  bool vanishing_minus() const { return minus == 0.0; }
  bool vanishing_plus() const { return plus == 0.0; }
};

class WeightModel {
 public:
  using Variant = std::variant<Krawtchouk, ConvexPotential, PoissonizedJack, Tabulated>;

  WeightModel(Krawtchouk k);
  WeightModel(ConvexPotential p);
  WeightModel(PoissonizedJack j);
  WeightModel(Tabulated t);

  const Variant& variant() const { return model_; }
  std::string kind() const;

  /// ln w(x), or −∞ outside the support.
  double log_w(double x) const;

  /// ψ± with w(x)/w(x−1) = ψ⁺(x)/ψ⁻(x).
  PsiRatio psi_ratio(double x) const;

  PositionBox support_box() const;

  /// Required θ, when the family fixes it (Krawtchouk: 1, Jack: its own θ).
  std::optional<double> required_theta() const;

 private:
  Variant model_;
};

/// Default truncation box [−LN, LN] for a convex potential: the smallest
/// integer L ≥ 1 at which κ (V(±L) − V(0)) exceeds 8θ (1 + ln(1 + L)).
PositionBox default_convex_box(const std::function<double(double)>& V, double kappa,
                               double theta, long n_particles);

/// JSON descriptor, e.g. {"kind":"krawtchouk","M":40}. Convex potentials
/// carry only their scalars; the callable itself is not serializable.
nlohmann::json describe_weight(const WeightModel& weight);

/// Loads a Tabulated weight from a two-column CSV (x, log_w) with a header
/// row; x must be consecutive integers.
Tabulated load_tabulated_csv(const std::string& path);

}  // namespace dbeta
