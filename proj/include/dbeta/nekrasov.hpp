#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dbeta/ensemble.hpp"
#include "dbeta/sampler.hpp"
#include "dbeta/weights.hpp"

namespace dbeta {

using cplx = std::complex<double>;

/// Lattice-scale ψ± with w(x)/w(x−1) = ψ⁺(x)/ψ⁻(x), continued to complex ξ.
/// Degrees are −1 when ψ is not a polynomial.
struct PsiPair {
  std::function<cplx(cplx)> plus;
  std::function<cplx(cplx)> minus;
  int degree_plus = -1;
  int degree_minus = -1;

  int max_degree() const { return std::max(degree_plus, degree_minus); }
};

/// Polynomial ψ± for the Krawtchouk and Poissonized Jack weights.
PsiPair psi_pair_for(const WeightModel& weight);

class PoleProximity : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// ∏(1 − θ/(ξ − ℓ_i)).
cplx product_minus(const Configuration& config, cplx xi);
/// ∏(1 + θ/(ξ − ℓ_i − 1)).
cplx product_plus(const Configuration& config, cplx xi);

/// ψ⁻(ξ) ∏⁻ + ψ⁺(ξ) ∏⁺ for one configuration.
cplx nekrasov_summand(const Configuration& config, const PsiPair& psi, cplx xi);

/// R_N(ξ) under the exact law.
cplx R_N_exact(const ProbabilityTable& table, const PsiPair& psi, cplx xi);
cplx R_N_exact(const EnsembleParams& params, const WeightModel& weight, const PsiPair& psi, cplx xi);

/// Least-squares polynomial through (ξ_k, R_k) in powers of ξ. The residual is
/// max |fit − R| relative to max(1, max |R|).
struct PolynomialFit {
  std::vector<cplx> coefficients;
  double residual = 0.0;
};

PolynomialFit fit_polynomial(const std::vector<cplx>& xi, const std::vector<cplx>& values, int degree);

struct ResidueCheck {
  double pole = 0.0;
  cplx residue;
  double standard_error = 0.0;
  bool pass = false;
};

struct ResidueOptions {
  int n_check = 8;
  double radius = 0.25;
  int nodes = 16;
  /// Explicit lattice poles; when empty the n_check candidates nearest the
  /// middle of the occupied range are used.
  std::vector<double> poles;
  /// Absolute slack added to 3·SE to absorb rounding in the contour sum.
  double floor = 1e-9;
};

struct NekrasovReport {
  std::string mode;  // "exact" or "mcmc"
  long n_samples = 0;
  std::vector<cplx> xi;
  std::vector<cplx> R_values;
  std::vector<double> R_stderr;
  std::optional<PolynomialFit> fit;
  std::vector<ResidueCheck> residue_checks;

  bool residues_pass() const;
};

/// Exact report; all stated uncertainties are zero.
NekrasovReport R_N_exact_report(const ProbabilityTable& table, const PsiPair& psi, const std::vector<cplx>& xi,
                                const ResidueOptions& residues = {});

/// Monte Carlo report. Sums are taken in a canonical order so the result does
/// not depend on the order of the batch.
NekrasovReport R_N_monte_carlo(const SampleBatch& batch, const PsiPair& psi, const std::vector<cplx>& xi,
                               const ResidueOptions& residues = {});

/// n points on the circle |ξ − centre| = radius, rotated off the real axis.
std::vector<cplx> circle_points(cplx centre, double radius, int n);

nlohmann::json to_json(const NekrasovReport& report);

}  // namespace dbeta
