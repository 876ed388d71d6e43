#pragma once

#include <functional>
#include <stdexcept>

namespace dbeta {

/// Endpoint factor ω(y) carried by the integrand on [a, b].
enum class EndpointWeight {
  None,         // 1
  InverseSqrt,  // 1/√((y−a)(b−y))
  Sqrt          // √((y−a)(b−y))
};

class QuadratureFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Closed forms of PV∫_a^b ω(y)/(x−y) dy for the two endpoint weights.
/// Outside [a, b] the root √((x−a)(x−b)) takes the branch that behaves like x.
struct HilbertIdentities {
  double inverse_sqrt_kernel = 0.0;
  double sqrt_kernel = 0.0;
};

HilbertIdentities pv_hilbert_identities(double a, double b, double x);

/// PV∫_a^b u(y) ω(y)/(x − y) dy by the substitution y = (a+b)/2 + (b−a)/2 cos t
/// and singularity subtraction at the image of x. Throws QuadratureFailure
/// when the adaptive rule misses `tol`.
double pv_hilbert_numeric(const std::function<double(double)>& u, EndpointWeight weight, double a, double b,
                          double x, double tol = 1e-11);

/// f(x) from its finite Hilbert transform g on [a, b] and its total mass C:
/// f(x) = [PV∫ √((y−a)(b−y)) g(y)/(y−x) dy / π + C] / (π √((x−a)(b−x))).
double inverse_hilbert(const std::function<double(double)>& g, double a, double b, double total_mass, double x,
                       double tol = 1e-11);

}  // namespace dbeta
