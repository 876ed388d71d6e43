#include "dbeta/equilibrium.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "dbeta/special.hpp"

namespace dbeta {
namespace {

constexpr double kVoidFraction = 1e-3;
constexpr int kMinRegionCells = 3;

// 8-point Gauss–Legendre on [−1, 1].
constexpr std::array<double, 8> kGLNodes = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                            -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                            0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGLWeights = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                              0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                              0.2223810344533745, 0.1012285362903763};

double cell_average(const std::function<double(double)>& f, double mid, double h) {
  double s = 0.0;
  for (std::size_t k = 0; k < kGLNodes.size(); ++k) s += kGLWeights[k] * f(mid + 0.5 * h * kGLNodes[k]);
  return 0.5 * s;
}

// Second antiderivative of ln|t|.
double G2(double t) {
  if (t == 0.0) return 0.0;
  return 0.5 * t * t * std::log(std::abs(t)) - 0.75 * t * t;
}

Eigen::VectorXd grid_midpoints(double lo, double hi, int n) {
  const double h = (hi - lo) / n;
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = lo + (i + 0.5) * h;
  return x;
}

Eigen::MatrixXd kernel_matrix(int n, double h) {
  Eigen::VectorXd row(n);
  for (int d = 0; d < n; ++d) row[d] = log_kernel_cell_average(d * h, h);
  Eigen::MatrixXd K(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) K(i, j) = row[std::abs(i - j)];
  return K;
}

// Euclidean projection onto {0 ≤ ρ ≤ cap, h Σ ρ = 1}: clamp(y − τ) with τ
// found by bisection.
Eigen::VectorXd project(const Eigen::VectorXd& y, double cap, double h) {
  auto mass = [&](double tau) { return h * (y.array() - tau).max(0.0).min(cap).sum(); };
  double lo = y.minCoeff() - cap - 1.0;
  double hi = y.maxCoeff() + 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo) + std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (mass(mid) > 1.0 ? lo : hi) = mid;
  }
  const double tau = 0.5 * (lo + hi);
  return (y.array() - tau).max(0.0).min(cap).matrix();
}

double largest_eigenvalue_on_zero_mass(const Eigen::MatrixXd& Q) {
  const int n = static_cast<int>(Q.rows());
  Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(n, -1.0, 1.0);
  v.array() += 0.1 * Eigen::VectorXd::LinSpaced(n, 0.0, 1.0).array().square();
  double lambda = 0.0;
  for (int it = 0; it < 300; ++it) {
    v.array() -= v.mean();
    v.normalize();
    Eigen::VectorXd w = Q * v;
    w.array() -= w.mean();
    const double next = v.dot(w);
    v = w;
    if (it > 20 && std::abs(next - lambda) <= 1e-6 * std::abs(next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return lambda;
}

// Indices of maximal runs with the same label.
struct Run {
  RegionKind kind;
  int begin;
  int end;  // exclusive
};

std::vector<Run> runs_of(const std::vector<RegionKind>& labels) {
  std::vector<Run> runs;
  for (int i = 0; i < static_cast<int>(labels.size()); ++i) {
    if (runs.empty() || runs.back().kind != labels[i]) {
      runs.push_back({labels[i], i, i + 1});
    } else {
      runs.back().end = i + 1;
    }
  }
  return runs;
}

std::vector<Run> merge_short(std::vector<Run> runs) {
  bool changed = true;
  while (changed && runs.size() > 1) {
    changed = false;
    // Shortest run under the limit goes first so merging is order-free.
    std::size_t pick = runs.size();
    for (std::size_t k = 0; k < runs.size(); ++k) {
      const int len = runs[k].end - runs[k].begin;
      if (len < kMinRegionCells && (pick == runs.size() || len < runs[pick].end - runs[pick].begin)) pick = k;
    }
    if (pick == runs.size()) break;
    std::size_t into;
    if (pick == 0) {
      into = 1;
    } else if (pick + 1 == runs.size()) {
      into = pick - 1;
    } else {
      const int left = runs[pick - 1].end - runs[pick - 1].begin;
      const int right = runs[pick + 1].end - runs[pick + 1].begin;
      into = left >= right ? pick - 1 : pick + 1;
    }
    runs[into].begin = std::min(runs[into].begin, runs[pick].begin);
    runs[into].end = std::max(runs[into].end, runs[pick].end);
    runs.erase(runs.begin() + static_cast<long>(pick));
    std::vector<Run> fused;
    for (const auto& r : runs) {
      if (!fused.empty() && fused.back().kind == r.kind) {
        fused.back().end = r.end;
      } else {
        fused.push_back(r);
      }
    }
    runs = std::move(fused);
    changed = true;
  }
  return runs;
}

std::vector<Run> classify_runs(const EquilibriumMeasure& m) {
  const double cap = 1.0 / m.theta;
  std::vector<RegionKind> labels(static_cast<std::size_t>(m.size()));
  for (int i = 0; i < m.size(); ++i) {
    const double r = m.density[i];
    labels[static_cast<std::size_t>(i)] = r < kVoidFraction * cap           ? RegionKind::Void
                                          : r > (1.0 - kVoidFraction) * cap ? RegionKind::Saturated
                                                                            : RegionKind::Band;
  }
  return merge_short(runs_of(labels));
}

// Root of a quadratic fit of `values` against x that lies nearest `guess`.
std::optional<double> fitted_root(const std::vector<double>& xs, const std::vector<double>& ys, double guess,
                                  double h) {
  const auto n = static_cast<Eigen::Index>(xs.size());
  if (n < 4) return std::nullopt;
  Eigen::MatrixXd X(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = (xs[static_cast<std::size_t>(i)] - guess) / h;
    X(i, 0) = 1.0;
    X(i, 1) = t;
    X(i, 2) = t * t;
    y[i] = ys[static_cast<std::size_t>(i)];
  }
  const Eigen::Vector3d c = X.colPivHouseholderQr().solve(y);
  std::vector<double> roots;
  if (std::abs(c[2]) < 1e-14 * (std::abs(c[1]) + std::abs(c[0]))) {
    if (c[1] != 0.0) roots.push_back(-c[0] / c[1]);
  } else {
    const double disc = c[1] * c[1] - 4.0 * c[2] * c[0];
    if (disc >= 0.0) {
      const double s = std::sqrt(disc);
      roots.push_back((-c[1] - s) / (2.0 * c[2]));
      roots.push_back((-c[1] + s) / (2.0 * c[2]));
    }
  }
  std::optional<double> best;
  for (double r : roots) {
    if (std::abs(r) > 3.0) continue;  // stay within a few cells of the coarse edge
    if (!best || std::abs(r) < std::abs(*best)) best = r;
  }
  if (!best) return std::nullopt;
  return guess + *best * h;
}

void finalize_regions(EquilibriumMeasure& m) {
  m.regions = classify_regions(m);
  const auto [a, b] = extract_edges(m);
  m.A = a;
  m.B = b;
}

}  // namespace

std::string to_string(RegionKind kind) {
  switch (kind) {
    case RegionKind::Void:
      return "void";
    case RegionKind::Band:
      return "band";
    case RegionKind::Saturated:
      return "saturated";
  }
  return "band";
}

RegionKind region_kind_from_string(const std::string& s) {
  if (s == "void") return RegionKind::Void;
  if (s == "band") return RegionKind::Band;
  if (s == "saturated") return RegionKind::Saturated;
  throw std::invalid_argument("unknown region kind: " + s);
}

double EquilibriumMeasure::cdf(double x) const {
  if (x <= lo) return 0.0;
  const double h = cell_width();
  const double pos = (std::min(x, hi) - lo) / h;
  const int full = std::min(static_cast<int>(pos), size());
  double s = h * density.head(full).sum();
  if (full < size()) s += (pos - full) * h * density[full];
  return s;
}

SolverNotConverged::SolverNotConverged(double residual, long iterations)
    : std::runtime_error("equilibrium solver did not converge after " + std::to_string(iterations) +
                         " iterations, KKT residual " + std::to_string(residual)),
      residual_(residual) {}

double log_kernel_cell_average(double offset, double h) {
  const double t = std::abs(offset);
  if (t < 0.5 * h) return std::log(h) - 1.5;
  return (G2(t + h) - 2.0 * G2(t) + G2(t - h)) / (h * h);
}

EquilibriumMeasure solve_constrained(const std::function<double(double)>& V, double theta, Interval support,
                                     const SolverOptions& options) {
  if (!(theta > 0.0)) throw std::invalid_argument("solve_constrained: theta must be positive");
  if (!(support.hi > support.lo)) throw std::invalid_argument("solve_constrained: empty support");
  if (options.grid_n < 64) throw std::invalid_argument("solve_constrained: grid_n must be at least 64");
  if ((support.hi - support.lo) / theta < 1.0) {
    throw std::invalid_argument("solve_constrained: support too short to carry unit mass under rho <= 1/theta");
  }
  const int n = options.grid_n;
  const double cap = 1.0 / theta;
  EquilibriumMeasure m;
  m.lo = support.lo;
  m.hi = support.hi;
  m.theta = theta;
  m.grid = grid_midpoints(support.lo, support.hi, n);
  const double h = m.cell_width();

  Eigen::VectorXd Vc(n);
  for (int i = 0; i < n; ++i) {
    Vc[i] = cell_average(V, m.grid[i], h);
    if (!std::isfinite(Vc[i])) throw std::invalid_argument("solve_constrained: V is not finite on the support");
  }
  const Eigen::MatrixXd Q = (-2.0 * theta * h * h) * kernel_matrix(n, h);
  const Eigen::VectorXd c = h * Vc;
  const double L = 1.02 * largest_eigenvalue_on_zero_mass(Q);

  auto energy = [&](const Eigen::VectorXd& r, const Eigen::VectorXd& Qr) { return 0.5 * r.dot(Qr) + c.dot(r); };

  // F on the grid given Qρ: (∇E)/h − f_V.
  auto residual_of = [&](const Eigen::VectorXd& r, const Eigen::VectorXd& Qr) {
    const Eigen::VectorXd F = (Qr + c) / h;
    // Sign conditions on cells pinned at a bound, equality on free cells.
    std::vector<double> free_vals;
    for (int i = 0; i < n; ++i)
      if (r[i] > 0.0 && r[i] < cap) free_vals.push_back(F[i]);
    if (free_vals.empty()) return std::pair<double, double>{0.0, 0.0};
    std::nth_element(free_vals.begin(), free_vals.begin() + static_cast<long>(free_vals.size() / 2), free_vals.end());
    const double fv = free_vals[free_vals.size() / 2];
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      const double Fi = F[i] - fv;
      if (r[i] <= 0.0) {
        worst = std::max(worst, -Fi);
      } else if (r[i] >= cap) {
        worst = std::max(worst, Fi);
      } else {
        worst = std::max(worst, std::abs(Fi));
      }
    }
    return std::pair<double, double>{worst, fv};
  };

  Eigen::VectorXd rho = project(Eigen::VectorXd::Constant(n, 1.0 / (support.hi - support.lo)), cap, h);
  Eigen::VectorXd Qrho = Q * rho;
  double E = energy(rho, Qrho);
  Eigen::VectorXd y = rho;
  Eigen::VectorXd Qy = Qrho;
  double t = 1.0;
  double res = std::numeric_limits<double>::infinity();
  long it = 0;
  if (options.record_energy) m.energy_trace.push_back(E);
  for (; it < options.max_iter; ++it) {
    const Eigen::VectorXd z = project(y - (Qy + c) / L, cap, h);
    const Eigen::VectorXd Qz = Q * z;
    const double Ez = energy(z, Qz);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    Eigen::VectorXd rho_next, Qrho_next;
    double E_next;
    if (Ez <= E) {
      rho_next = z;
      Qrho_next = Qz;
      E_next = Ez;
    } else {
      rho_next = rho;
      Qrho_next = Qrho;
      E_next = E;
    }
    const double a1 = t / t_next;
    const double a2 = (t - 1.0) / t_next;
    y = rho_next + a1 * (z - rho_next) + a2 * (rho_next - rho);
    Qy = Qrho_next + a1 * (Qz - Qrho_next) + a2 * (Qrho_next - Qrho);
    rho = std::move(rho_next);
    Qrho = std::move(Qrho_next);
    E = E_next;
    t = t_next;
    if (options.record_energy) m.energy_trace.push_back(E);
    if (it % 50 == 49) {
      // Restart the momentum when the iterate stalls.
      if (Ez > E) t = 1.0;
      res = residual_of(rho, Qrho).first;
      if (res <= options.tol) {
        ++it;
        break;
      }
    }
  }
  res = residual_of(rho, Qrho).first;
  if (res > options.tol) throw SolverNotConverged(res, it);

  m.density = rho;
  m.iterations = it;
  finalize_regions(m);
  attach_effective_potential(m, V);
  m.kkt_residual = res;
  return m;
}

EquilibriumMeasure tabulate_measure(const std::function<double(double)>& density, double theta, Interval support,
                                    int grid_n, const std::function<double(double)>& V,
                                    std::optional<std::pair<double, double>> edges) {
  if (grid_n < 1) throw std::invalid_argument("tabulate_measure: grid_n must be positive");
  EquilibriumMeasure m;
  m.lo = support.lo;
  m.hi = support.hi;
  m.theta = theta;
  m.grid = grid_midpoints(support.lo, support.hi, grid_n);
  m.density.resize(grid_n);
  const double h = m.cell_width();
  for (int i = 0; i < grid_n; ++i) m.density[i] = cell_average(density, m.grid[i], h);
  m.regions = classify_regions(m);
  if (edges) {
    m.A = edges->first;
    m.B = edges->second;
  } else {
    const auto [a, b] = extract_edges(m);
    m.A = a;
    m.B = b;
  }
  if (V) {
    attach_effective_potential(m, V);
    m.kkt_residual = kkt_residual(m);
  }
  return m;
}

std::vector<Region> classify_regions(const EquilibriumMeasure& measure) {
  const double h = measure.cell_width();
  std::vector<Region> out;
  for (const auto& r : classify_runs(measure)) {
    out.push_back({r.kind, measure.lo + r.begin * h, measure.lo + r.end * h});
  }
  return out;
}

std::pair<double, double> extract_edges(const EquilibriumMeasure& m) {
  const auto runs = classify_runs(m);
  const double h = m.cell_width();
  const double cap = 1.0 / m.theta;
  int first = -1, last = -1;
  for (int k = 0; k < static_cast<int>(runs.size()); ++k) {
    if (runs[static_cast<std::size_t>(k)].kind == RegionKind::Band) {
      if (first < 0) first = k;
      last = k;
    }
  }
  if (first < 0) return {m.lo, m.lo};
  const Run& fb = runs[static_cast<std::size_t>(first)];
  const Run& lb = runs[static_cast<std::size_t>(last)];
  double A = m.lo + fb.begin * h;
  double B = m.lo + lb.end * h;
  const int window = std::max(6, m.size() / 200);

  auto refine = [&](double coarse, int from, int to, bool saturated_side) {
    std::vector<double> xs, ys;
    for (int i = std::max(from, 0); i < std::min(to, m.size()); ++i) {
      const double d = saturated_side ? cap - m.density[i] : m.density[i];
      xs.push_back(m.grid[i]);
      ys.push_back(d * d);
    }
    return fitted_root(xs, ys, coarse, h).value_or(coarse);
  };

  if (first > 0) {
    const bool sat = runs[static_cast<std::size_t>(first - 1)].kind == RegionKind::Saturated;
    A = refine(A, fb.begin + 1, fb.begin + 1 + window, sat);
  }
  if (last + 1 < static_cast<int>(runs.size())) {
    const bool sat = runs[static_cast<std::size_t>(last + 1)].kind == RegionKind::Saturated;
    B = refine(B, lb.end - 1 - window, lb.end - 1, sat);
  }
  return {A, B};
}

void attach_effective_potential(EquilibriumMeasure& m, const std::function<double(double)>& V) {
  const int n = m.size();
  const double h = m.cell_width();
  const Eigen::MatrixXd K = kernel_matrix(n, h);
  Eigen::VectorXd Vc(n);
  for (int i = 0; i < n; ++i) Vc[i] = cell_average(V, m.grid[i], h);
  m.FV = Vc - (2.0 * m.theta * h) * (K * m.density);
  // f_V from the midpoint of the widest band.
  const Region* widest = nullptr;
  for (const auto& r : m.regions) {
    if (r.kind == RegionKind::Band && (!widest || r.hi - r.lo > widest->hi - widest->lo)) widest = &r;
  }
  if (widest) {
    const int i = std::clamp(static_cast<int>((0.5 * (widest->lo + widest->hi) - m.lo) / h), 0, n - 1);
    m.f_V = m.FV[i];
  } else {
    m.f_V = m.FV.minCoeff();
  }
  m.FV.array() -= m.f_V;
}

double kkt_residual(const EquilibriumMeasure& m) {
  if (m.FV.size() != m.size()) throw std::invalid_argument("kkt_residual: measure has no effective potential");
  const auto runs = classify_runs(m);
  double worst = 0.0;
  for (const auto& r : runs) {
    // Cells next to a region boundary belong to the edge layer and are skipped.
    for (int i = r.begin + 1; i + 1 < r.end; ++i) {
      const double F = m.FV[i];
      switch (r.kind) {
        case RegionKind::Void:
          worst = std::max(worst, -F);
          break;
        case RegionKind::Saturated:
          worst = std::max(worst, F);
          break;
        case RegionKind::Band:
          worst = std::max(worst, std::abs(F));
          break;
      }
    }
  }
  return worst;
}

ClassicalLocations classical_locations(const EquilibriumMeasure& measure, int n) {
  if (n < 1) throw std::invalid_argument("classical_locations: N must be positive");
  const int cells = measure.size();
  const double h = measure.cell_width();
  Eigen::VectorXd cum(cells + 1);
  cum[0] = 0.0;
  for (int i = 0; i < cells; ++i) cum[i + 1] = cum[i] + h * measure.density[i];
  ClassicalLocations out;
  out.gammas.resize(n);
  int cell = 0;
  for (int i = 0; i < n; ++i) {
    const double target = (i + 0.5) / n;
    while (cell < cells && cum[cell + 1] < target) ++cell;
    if (cell >= cells) {
      out.gammas[i] = measure.hi;
      continue;
    }
    const double inside = measure.density[cell] > 0.0 ? (target - cum[cell]) / (h * measure.density[cell]) : 0.0;
    out.gammas[i] = measure.lo + (cell + std::clamp(inside, 0.0, 1.0)) * h;
  }
  return out;
}

std::complex<double> stieltjes_Gmu(const EquilibriumMeasure& measure, std::complex<double> z) {
  if (z.imag() == 0.0 && z.real() >= measure.lo && z.real() <= measure.hi) {
    throw std::domain_error("stieltjes_Gmu: z lies on the support");
  }
  const double h = measure.cell_width();
  std::complex<double> s = 0.0;
  for (int i = 0; i < measure.size(); ++i) {
    if (measure.density[i] == 0.0) continue;
    const double l = measure.lo + i * h;
    s += measure.density[i] * std::log((z - l) / (z - (l + h)));
  }
  return s;
}

EquilibriumMeasure dual_measure(const EquilibriumMeasure& measure) {
  EquilibriumMeasure d = measure;
  d.density = (1.0 / measure.theta - measure.density.array()).max(0.0).matrix();
  for (auto& r : d.regions) {
    if (r.kind == RegionKind::Void) {
      r.kind = RegionKind::Saturated;
    } else if (r.kind == RegionKind::Saturated) {
      r.kind = RegionKind::Void;
    }
  }
  if (d.FV.size() == d.size()) d.FV = -d.FV;
  d.f_V = -d.f_V;
  d.energy_trace.clear();
  return d;
}

std::pair<std::complex<double>, std::complex<double>> RQ_mu(const ComplexFn& G, const ComplexFn& phi_plus,
                                                            const ComplexFn& phi_minus, double theta,
                                                            std::complex<double> z) {
  const std::complex<double> g = theta * G(z);
  const std::complex<double> minus = phi_minus(z) * std::exp(-g);
  const std::complex<double> plus = phi_plus(z) * std::exp(g);
  return {minus + plus, minus - plus};
}

std::pair<std::complex<double>, std::complex<double>> RQ_mu(const EquilibriumMeasure& measure,
                                                            const ComplexFn& phi_plus, const ComplexFn& phi_minus,
                                                            std::complex<double> z) {
  return RQ_mu([&](std::complex<double> w) { return stieltjes_Gmu(measure, w); }, phi_plus, phi_minus,
               measure.theta, z);
}

double edge_coefficient(const EquilibriumMeasure& m, EdgeSide side, double window) {
  const auto runs = classify_runs(m);
  int band = -1;
  for (int k = 0; k < static_cast<int>(runs.size()); ++k) {
    if (runs[static_cast<std::size_t>(k)].kind != RegionKind::Band) continue;
    if (side == EdgeSide::Left && band < 0) band = k;
    if (side == EdgeSide::Right) band = k;
  }
  if (band < 0) throw std::invalid_argument("edge_coefficient: measure has no band");
  const int neighbour = side == EdgeSide::Left ? band - 1 : band + 1;
  if (neighbour >= 0 && neighbour < static_cast<int>(runs.size()) &&
      runs[static_cast<std::size_t>(neighbour)].kind == RegionKind::Saturated) {
    throw std::invalid_argument("edge_coefficient: edge is adjacent to a saturated region");
  }
  const double edge = side == EdgeSide::Left ? m.A : m.B;
  if (window <= 0.0) window = 0.08 * (m.B - m.A);
  const double h = m.cell_width();

  // Model ρ ≈ (s/π)(√d + κ₁ d^{3/2} + κ₂ d^{5/2}) with d the distance to the
  // edge, compared through exact cell averages of each basis function.
  std::vector<std::array<double, 4>> rows;
  for (int i = 0; i < m.size(); ++i) {
    const double l = m.lo + i * h;
    const double r = l + h;
    double dl, dr;
    if (side == EdgeSide::Left) {
      dl = l - edge;
      dr = r - edge;
    } else {
      dl = edge - r;
      dr = edge - l;
    }
    if (dl < 0.0 || dr > window) continue;
    const double b1 = (2.0 / 3.0) * (std::pow(dr, 1.5) - std::pow(dl, 1.5)) / h;
    const double b2 = (2.0 / 5.0) * (std::pow(dr, 2.5) - std::pow(dl, 2.5)) / h;
    const double b3 = (2.0 / 7.0) * (std::pow(dr, 3.5) - std::pow(dl, 3.5)) / h;
    rows.push_back({b1, b2, b3, m.density[i]});
  }
  if (rows.size() < 6) throw std::invalid_argument("edge_coefficient: fitting window holds too few cells");
  Eigen::MatrixXd X(static_cast<Eigen::Index>(rows.size()), 3);
  Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto r = static_cast<Eigen::Index>(k);
    X.row(r) << rows[k][0], rows[k][1], rows[k][2];
    y[r] = rows[k][3];
  }
  const Eigen::VectorXd coef = X.colPivHouseholderQr().solve(y);
  return kPi * coef[0];
}

double krawtchouk_density(double m, double x) {
  if (!(m > 1.0)) throw std::invalid_argument("krawtchouk_density: m must exceed 1");
  const double d = x - 0.5 * m;
  const double r2 = m - 1.0;
  if (d * d < r2) {
    const double y = (m - 2.0) / (2.0 * std::sqrt(r2 - d * d));
    return (0.5 * kPi - std::atan(y)) / kPi;
  }
  if (m < 2.0 && std::abs(d) <= 0.5 * m) return 1.0;
  return 0.0;
}

double krawtchouk_dual_density(double m, double x) {
  if (!(m > 1.0)) throw std::invalid_argument("krawtchouk_dual_density: m must exceed 1");
  const double d = x - 0.5 * m;
  if (d * d >= m - 1.0) return 0.0;
  return (1.0 - krawtchouk_density(m, x)) / (m - 1.0);
}

std::pair<double, double> krawtchouk_edges(double m) {
  const double r = std::sqrt(m - 1.0);
  return {0.5 * m - r, 0.5 * m + r};
}

double krawtchouk_potential(double m, double u) {
  auto xlogx = [](double t) { return t > 0.0 ? t * std::log(t) : 0.0; };
  if (u < 0.0 || u > m) return std::numeric_limits<double>::infinity();
  return xlogx(u) + xlogx(m - u) - xlogx(m);
}

double JackEquilibrium::density(double x) const {
  if (x < 0.0 || x > B) return 0.0;
  if (x <= A) return 1.0 / theta;
  return 2.0 / (kPi * theta) * std::atan(std::sqrt((B - x) / (x - A)));
}

std::complex<double> JackEquilibrium::G(std::complex<double> z) const {
  const std::complex<double> root = std::sqrt(z - A) * std::sqrt(z - B);
  return std::log(((z * z - theta * z) - z * root) / (2.0 * theta / (c * c))) / theta;
}

double JackEquilibrium::right_edge_coefficient() const { return std::sqrt(c) / std::pow(theta, 1.25); }

JackEquilibrium jack_equilibrium(double theta, double c) {
  if (!(theta > 0.0) || !(c > 0.0)) throw std::invalid_argument("jack_equilibrium: theta and c must be positive");
  if (theta < 4.0 / (c * c)) throw std::invalid_argument("jack_equilibrium: needs theta >= (2/c)^2");
  const double r = 2.0 * std::sqrt(theta) / c;
  return JackEquilibrium{theta, c, theta - r, theta + r};
}

double jack_potential(double theta, double c, double x) {
  if (x < 0.0) return std::numeric_limits<double>::infinity();
  const double xlogx = x > 0.0 ? x * std::log(x) : 0.0;
  return 2.0 * xlogx - 2.0 * x - x * std::log(theta / (c * c));
}

}  // namespace dbeta
