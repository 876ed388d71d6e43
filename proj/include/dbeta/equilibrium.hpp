#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace dbeta {

enum class RegionKind { Void, Band, Saturated };

std::string to_string(RegionKind kind);
RegionKind region_kind_from_string(const std::string& s);

struct Region {
  RegionKind kind = RegionKind::Band;
  double lo = 0.0;
  double hi = 0.0;
};

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

enum class EdgeSide { Left, Right };

/// Piecewise-constant density on a uniform grid of [lo, hi].
struct EquilibriumMeasure {
  double lo = 0.0;
  double hi = 1.0;
  double theta = 1.0;
  Eigen::VectorXd grid;     // cell midpoints
  Eigen::VectorXd density;  // cell averages
  Eigen::VectorXd FV;       // effective potential at midpoints; empty without V
  double f_V = 0.0;
  std::vector<Region> regions;
  double A = 0.0;
  double B = 0.0;
  double kkt_residual = 0.0;
  long iterations = 0;
  std::vector<double> energy_trace;

  int size() const { return static_cast<int>(grid.size()); }
  double cell_width() const { return (hi - lo) / static_cast<double>(grid.size()); }
  double mass() const { return cell_width() * density.sum(); }
  /// ∫_lo^x ρ, exact for the piecewise-constant density.
  double cdf(double x) const;
};

struct SolverOptions {
  int grid_n = 2000;
  double tol = 1e-5;
  long max_iter = 200000;
  /// Record the energy of every accepted iterate.
  bool record_energy = false;
};

class SolverNotConverged : public std::runtime_error {
 public:
  SolverNotConverged(double residual, long iterations);
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Cell average of ln|x − y| over two cells of width h whose centres are
/// `offset` apart.
double log_kernel_cell_average(double offset, double h);

/// Minimizes −θ∫∫ ln|x−y| ρρ + ∫Vρ over 0 ≤ ρ ≤ 1/θ with unit mass on the
/// support, by monotone accelerated projected gradient.
EquilibriumMeasure solve_constrained(const std::function<double(double)>& V, double theta, Interval support,
                                     const SolverOptions& options = {});

/// Discretizes a known density by cell averages. Edges are taken from
/// `edges` when given, otherwise extracted like a solved measure.
EquilibriumMeasure tabulate_measure(const std::function<double(double)>& density, double theta, Interval support,
                                    int grid_n, const std::function<double(double)>& V = {},
                                    std::optional<std::pair<double, double>> edges = std::nullopt);

/// Region taxonomy of a gridded density, with the thresholds 1e-3/θ and
/// (1 − 1e-3)/θ and runs under 3 cells merged into their neighbours.
std::vector<Region> classify_regions(const EquilibriumMeasure& measure);

/// Outermost band endpoints, refined by a quadratic fit of ρ² (or of
/// (1/θ − ρ)² next to a saturated region) over the cells near the edge.
std::pair<double, double> extract_edges(const EquilibriumMeasure& measure);

/// Effective potential and f_V (F_V = 0 at the midpoint of the widest band).
void attach_effective_potential(EquilibriumMeasure& measure, const std::function<double(double)>& V);

/// Largest violation of the sign conditions on F_V over voids, bands and
/// saturated regions.
double kkt_residual(const EquilibriumMeasure& measure);

struct ClassicalLocations {
  Eigen::VectorXd gammas;
};

/// γ_i with ∫_lo^{γ_i} ρ = (i − 1/2)/N.
ClassicalLocations classical_locations(const EquilibriumMeasure& measure, int n);

/// ∫ ρ(x)/(z − x) dx, exact for the piecewise-constant density.
std::complex<double> stieltjes_Gmu(const EquilibriumMeasure& measure, std::complex<double> z);

/// Density 1/θ − ρ on the same support; its mass is (hi − lo)/θ − 1.
EquilibriumMeasure dual_measure(const EquilibriumMeasure& measure);

using ComplexFn = std::function<std::complex<double>(std::complex<double>)>;

/// R = φ⁻ e^{−θG} + φ⁺ e^{θG}, Q = φ⁻ e^{−θG} − φ⁺ e^{θG}.
std::pair<std::complex<double>, std::complex<double>> RQ_mu(const ComplexFn& G, const ComplexFn& phi_plus,
                                                            const ComplexFn& phi_minus, double theta,
                                                            std::complex<double> z);
std::pair<std::complex<double>, std::complex<double>> RQ_mu(const EquilibriumMeasure& measure,
                                                            const ComplexFn& phi_plus, const ComplexFn& phi_minus,
                                                            std::complex<double> z);

/// s in ρ(x) ≈ s √|x − edge| / π (1 + O(x − edge)), fitted on cell averages
/// within `window` of the edge. Rejects edges next to a saturated region.
double edge_coefficient(const EquilibriumMeasure& measure, EdgeSide side, double window = 0.0);

/// Equilibrium density of the Krawtchouk ensemble with M/N → m.
double krawtchouk_density(double m, double x);
/// Normalized density of the hole ensemble for the same m.
double krawtchouk_dual_density(double m, double x);
/// Band endpoints m/2 ∓ √(m − 1).
std::pair<double, double> krawtchouk_edges(double m);
/// V(u) = u ln u + (m − u) ln(m − u) − m ln m on [0, m].
double krawtchouk_potential(double m, double u);

/// Poissonized Jack equilibrium: saturated on [0, A], band on [A, B].
struct JackEquilibrium {
  double theta = 1.0;
  double c = 6.0;
  double A = 0.0;
  double B = 0.0;

  double density(double x) const;
  std::complex<double> G(std::complex<double> z) const;
  /// s_B = √c / θ^{5/4}.
  double right_edge_coefficient() const;
};

JackEquilibrium jack_equilibrium(double theta, double c);
/// V(x) = 2x ln x − 2x − x ln(θ/c²).
double jack_potential(double theta, double c, double x);

}  // namespace dbeta
