#pragma once

#include <cmath>
#include <limits>

namespace dbeta {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846;

/// ln Γ(x + a) − ln Γ(x + b) for x + a > 0 and x + b > 0.
///
/// Integer shifts are reduced to a finite product, large arguments go through
/// the Stirling series written in terms of log1p so that the leading
/// (a − b) ln x term never cancels against two large lgamma values.
double log_gamma_ratio(double x, double a, double b);

/// Log of the pair factor Γ(d+1)Γ(d+θ) / (Γ(d)Γ(d+1−θ)) at gap d ≥ θ.
inline double log_pair_interaction(double gap, double theta) {
  return std::log(gap) + log_gamma_ratio(gap, theta, 1.0 - theta);
}

/// Ratio of pair factors at gaps e+1 and e, which is rational:
/// (e+1)(e+θ) / (e (e+1−θ)).
inline double pair_step_ratio(double gap, double theta) {
  return (gap + 1.0) * (gap + theta) / (gap * (gap + 1.0 - theta));
}

/// ln C(n, k) for real 0 ≤ k ≤ n via lgamma; −∞ outside that range.
double log_binomial(double n, double k);

}  // namespace dbeta
