#include "dbeta/nekrasov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <Eigen/Dense>

#include "dbeta/special.hpp"

namespace dbeta {
namespace {

constexpr double kPoleTol = 1e-12;

// Σ log(factor) avoids overflow for long products; the imaginary parts add
// up the phase without wrapping issues since exp handles any angle.
template <class Factor>
cplx log_product(const Configuration& config, Factor factor) {
  cplx acc(0.0, 0.0);
  for (int i = 0; i < config.size(); ++i) acc += std::log(factor(config.position(i)));
  return acc;
}

// Mean and standard error with sums taken over values sorted by (re, im).
struct MeanSe {
  cplx mean;
  double se = 0.0;
};

MeanSe order_free_mean(std::vector<cplx> v) {
  std::sort(v.begin(), v.end(), [](cplx a, cplx b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  const double n = static_cast<double>(v.size());
  cplx sum(0.0, 0.0);
  for (const auto& x : v) sum += x;
  const cplx mean = sum / n;
  double ss = 0.0;
  for (const auto& x : v) ss += std::norm(x - mean);
  const double se = v.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  return {mean, se};
}

std::vector<cplx> contour_nodes(double pole, const ResidueOptions& o) {
  std::vector<cplx> z(static_cast<std::size_t>(o.nodes));
  for (int k = 0; k < o.nodes; ++k) {
    const double phi = 2.0 * kPi * (k + 0.5) / o.nodes;
    z[static_cast<std::size_t>(k)] = pole + o.radius * cplx(std::cos(phi), std::sin(phi));
  }
  return z;
}

// (1/2πi)∮ f over the trapezoid nodes, for one configuration.
cplx contour_residue(const Configuration& c, const PsiPair& psi, double pole, const std::vector<cplx>& nodes) {
  cplx s(0.0, 0.0);
  for (const auto& z : nodes) s += nekrasov_summand(c, psi, z) * (z - pole);
  return s / static_cast<double>(nodes.size());
}

std::vector<double> choose_poles(const std::vector<const Configuration*>& configs, const ResidueOptions& o) {
  if (!o.poles.empty()) return o.poles;
  std::set<double> candidates;
  for (const auto* c : configs) {
    for (int i = 0; i < c->size(); ++i) {
      candidates.insert(c->position(i));
      candidates.insert(c->position(i) + 1.0);
    }
  }
  if (candidates.empty()) return {};
  const double mid = 0.5 * (*candidates.begin() + *candidates.rbegin());
  std::vector<double> sorted(candidates.begin(), candidates.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [mid](double a, double b) { return std::abs(a - mid) < std::abs(b - mid); });
  sorted.resize(std::min<std::size_t>(sorted.size(), static_cast<std::size_t>(std::max(0, o.n_check))));
  std::sort(sorted.begin(), sorted.end());
  return sorted;
}

std::function<cplx(cplx)> constant(double c) {
  return [c](cplx) { return cplx(c, 0.0); };
}

}  // namespace

PsiPair psi_pair_for(const WeightModel& weight) {
  if (const auto* k = std::get_if<Krawtchouk>(&weight.variant())) {
    const double m1 = static_cast<double>(k->M) + 1.0;
    return {[m1](cplx x) { return m1 - x; }, [](cplx x) { return x; }, 1, 1};
  }
  if (const auto* j = std::get_if<PoissonizedJack>(&weight.variant())) {
    const double t = j->theta;
    return {constant(j->theta * j->M), [t](cplx x) { return x * (x + t - 1.0); }, 0, 2};
  }
  throw std::invalid_argument("psi_pair_for: no polynomial ψ± for weight kind " + weight.kind());
}

cplx product_minus(const Configuration& config, cplx xi) {
  const double theta = config.params().theta;
  return std::exp(log_product(config, [&](double l) {
    if (std::abs(xi - l) < kPoleTol) throw PoleProximity("product_minus: ξ is at a pole");
    return 1.0 - theta / (xi - l);
  }));
}

cplx product_plus(const Configuration& config, cplx xi) {
  const double theta = config.params().theta;
  return std::exp(log_product(config, [&](double l) {
    if (std::abs(xi - l - 1.0) < kPoleTol) throw PoleProximity("product_plus: ξ is at a pole");
    return 1.0 + theta / (xi - l - 1.0);
  }));
}

cplx nekrasov_summand(const Configuration& config, const PsiPair& psi, cplx xi) {
  const cplx pm = psi.minus(xi);
  const cplx pp = psi.plus(xi);
  const cplx a = pm == 0.0 ? cplx(0.0) : pm * product_minus(config, xi);
  const cplx b = pp == 0.0 ? cplx(0.0) : pp * product_plus(config, xi);
  return a + b;
}

cplx R_N_exact(const ProbabilityTable& table, const PsiPair& psi, cplx xi) {
  cplx acc(0.0, 0.0);
  for (std::size_t k = 0; k < table.configurations.size(); ++k) {
    acc += table.probabilities[k] * nekrasov_summand(table.configurations[k], psi, xi);
  }
  return acc;
}

cplx R_N_exact(const EnsembleParams& params, const WeightModel& weight, const PsiPair& psi, cplx xi) {
  return R_N_exact(exact_distribution(params, weight), psi, xi);
}

PolynomialFit fit_polynomial(const std::vector<cplx>& xi, const std::vector<cplx>& values, int degree) {
  if (xi.size() != values.size()) throw std::invalid_argument("fit_polynomial: size mismatch");
  if (degree < 0) throw std::invalid_argument("fit_polynomial: negative degree");
  const auto n = static_cast<Eigen::Index>(xi.size());
  const Eigen::Index d = degree + 1;
  if (n < d) throw std::invalid_argument("fit_polynomial: need at least degree + 1 points");

  // Work in t = (ξ − c)/s for conditioning, then expand back to powers of ξ.
  cplx c(0.0, 0.0);
  for (const auto& z : xi) c += z;
  c /= static_cast<double>(n);
  double s = 0.0;
  for (const auto& z : xi) s = std::max(s, std::abs(z - c));
  if (s == 0.0) s = 1.0;

  Eigen::MatrixXcd V(n, d);
  Eigen::VectorXcd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const cplx t = (xi[static_cast<std::size_t>(i)] - c) / s;
    cplx p(1.0, 0.0);
    for (Eigen::Index j = 0; j < d; ++j) {
      V(i, j) = p;
      p *= t;
    }
    y[i] = values[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXcd a = V.colPivHouseholderQr().solve(y);
  const Eigen::VectorXcd r = V * a - y;
  double scale = 1.0;
  for (const auto& v : values) scale = std::max(scale, std::abs(v));

  // Σ_j a_j ((ξ − c)/s)^j = Σ_k coef_k ξ^k.
  std::vector<cplx> coef(static_cast<std::size_t>(d), cplx(0.0));
  for (int j = 0; j < d; ++j) {
    const cplx aj = a[j] / std::pow(cplx(s), j);
    for (int k = 0; k <= j; ++k) {
      const double binom = std::exp(log_binomial(j, k));
      coef[static_cast<std::size_t>(k)] += aj * binom * std::pow(-c, j - k);
    }
  }
  return {coef, r.cwiseAbs().maxCoeff() / scale};
}

std::vector<cplx> circle_points(cplx centre, double radius, int n) {
  std::vector<cplx> z(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double phi = 2.0 * kPi * (k + 0.37) / n;
    z[static_cast<std::size_t>(k)] = centre + radius * cplx(std::cos(phi), std::sin(phi));
  }
  return z;
}

bool NekrasovReport::residues_pass() const {
  return std::all_of(residue_checks.begin(), residue_checks.end(), [](const ResidueCheck& r) { return r.pass; });
}

NekrasovReport R_N_exact_report(const ProbabilityTable& table, const PsiPair& psi, const std::vector<cplx>& xi,
                                const ResidueOptions& residues) {
  NekrasovReport rep;
  rep.mode = "exact";
  rep.n_samples = static_cast<long>(table.configurations.size());
  rep.xi = xi;
  for (const auto& z : xi) {
    rep.R_values.push_back(R_N_exact(table, psi, z));
    rep.R_stderr.push_back(0.0);
  }
  if (psi.max_degree() >= 0 && static_cast<int>(xi.size()) > psi.max_degree() + 1) {
    rep.fit = fit_polynomial(xi, rep.R_values, psi.max_degree());
  }
  std::vector<const Configuration*> ptrs;
  for (const auto& c : table.configurations) ptrs.push_back(&c);
  for (double pole : choose_poles(ptrs, residues)) {
    const auto nodes = contour_nodes(pole, residues);
    cplx r(0.0, 0.0);
    for (std::size_t k = 0; k < table.configurations.size(); ++k) {
      r += table.probabilities[k] * contour_residue(table.configurations[k], psi, pole, nodes);
    }
    rep.residue_checks.push_back({pole, r, 0.0, std::abs(r) <= residues.floor});
  }
  return rep;
}

NekrasovReport R_N_monte_carlo(const SampleBatch& batch, const PsiPair& psi, const std::vector<cplx>& xi,
                               const ResidueOptions& residues) {
  if (batch.configurations.size() < 30) {
    throw std::invalid_argument("R_N_monte_carlo: batch has " + std::to_string(batch.configurations.size()) +
                                " samples, need at least 30");
  }
  NekrasovReport rep;
  rep.mode = "mcmc";
  rep.n_samples = static_cast<long>(batch.configurations.size());
  rep.xi = xi;
  std::vector<cplx> vals(batch.configurations.size());
  for (const auto& z : xi) {
    for (std::size_t s = 0; s < vals.size(); ++s) vals[s] = nekrasov_summand(batch.configurations[s], psi, z);
    const auto m = order_free_mean(vals);
    rep.R_values.push_back(m.mean);
    rep.R_stderr.push_back(m.se);
  }
  if (psi.max_degree() >= 0 && static_cast<int>(xi.size()) > psi.max_degree() + 1) {
    rep.fit = fit_polynomial(xi, rep.R_values, psi.max_degree());
  }
  std::vector<const Configuration*> ptrs;
  for (const auto& c : batch.configurations) ptrs.push_back(&c);
  for (double pole : choose_poles(ptrs, residues)) {
    const auto nodes = contour_nodes(pole, residues);
    for (std::size_t s = 0; s < vals.size(); ++s) {
      vals[s] = contour_residue(batch.configurations[s], psi, pole, nodes);
    }
    const auto m = order_free_mean(vals);
    rep.residue_checks.push_back({pole, m.mean, m.se, std::abs(m.mean) <= 3.0 * m.se + residues.floor});
  }
  return rep;
}

nlohmann::json to_json(const NekrasovReport& report) {
  auto c = [](cplx z) { return nlohmann::json::array({z.real(), z.imag()}); };
  nlohmann::json j;
  j["mode"] = report.mode;
  j["n_samples"] = report.n_samples;
  j["points"] = nlohmann::json::array();
  for (std::size_t k = 0; k < report.xi.size(); ++k) {
    j["points"].push_back({{"xi", c(report.xi[k])}, {"R", c(report.R_values[k])}, {"stderr", report.R_stderr[k]}});
  }
  if (report.fit) {
    nlohmann::json coef = nlohmann::json::array();
    for (const auto& a : report.fit->coefficients) coef.push_back(c(a));
    j["fit"] = {{"coefficients", coef}, {"residual", report.fit->residual}};
  } else {
    j["fit"] = nullptr;
  }
  j["residue_checks"] = nlohmann::json::array();
  for (const auto& r : report.residue_checks) {
    j["residue_checks"].push_back(
        {{"pole", r.pole}, {"residue", c(r.residue)}, {"stderr", r.standard_error}, {"pass", r.pass}});
  }
  j["residues_pass"] = report.residues_pass();
  return j;
}

}  // namespace dbeta
