#include "dbeta/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dbeta/special.hpp"

namespace dbeta {
namespace {

constexpr long kLambdaUnbounded = std::numeric_limits<long>::max() / 4;
constexpr double kLatticeTol = 1e-9;

bool near_integer(double x) { return std::abs(x - std::round(x)) <= kLatticeTol * std::max(1.0, std::abs(x)); }

}  // namespace

void EnsembleParams::validate() const {
  if (!(theta > 0.0)) throw std::invalid_argument("EnsembleParams: theta must be positive");
  if (n_particles < 1) throw std::invalid_argument("EnsembleParams: n_particles must be at least 1");
  if (std::isnan(a_lattice) || std::isnan(b_lattice)) throw std::invalid_argument("EnsembleParams: NaN endpoint");
  if (a_lattice == std::numeric_limits<double>::infinity() ||
      b_lattice == -std::numeric_limits<double>::infinity()) {
    throw std::invalid_argument("EnsembleParams: a must be < +inf and b > -inf");
  }
  if (lower_bounded() && upper_bounded()) {
    const double k = b_lattice - a_lattice - n_particles * theta;
    if (!near_integer(k) || std::round(k) < 1.0) {
      throw std::invalid_argument("EnsembleParams: b - a - N*theta must be a positive integer, got " +
                                  std::to_string(k));
    }
  }
}

long EnsembleParams::lambda_min() const { return lower_bounded() ? 1 : -kLambdaUnbounded; }

long EnsembleParams::lambda_max() const {
  if (!upper_bounded()) return kLambdaUnbounded;
  const double k = std::round(b_lattice - origin() - n_particles * theta);
  return static_cast<long>(k) - 1;
}

EnsembleParams EnsembleParams::krawtchouk(int n_particles, long m_max) {
  EnsembleParams p{1.0, n_particles, -2.0, static_cast<double>(m_max) + 1.0};
  p.validate();
  return p;
}

EnsembleParams EnsembleParams::jack(int n_particles, double theta) {
  EnsembleParams p{theta, n_particles, -1.0 - theta, std::numeric_limits<double>::infinity()};
  p.validate();
  return p;
}

bool operator==(const EnsembleParams& a, const EnsembleParams& b) {
  return a.theta == b.theta && a.n_particles == b.n_particles && a.a_lattice == b.a_lattice &&
         a.b_lattice == b.b_lattice;
}

Configuration::Configuration(EnsembleParams params, Lambdas lambdas)
    : params_(params), lambdas_(std::move(lambdas)) {
  params_.validate();
  if (static_cast<int>(lambdas_.size()) != params_.n_particles) {
    throw std::invalid_argument("Configuration: expected " + std::to_string(params_.n_particles) +
                                " lambdas, got " + std::to_string(lambdas_.size()));
  }
  for (std::size_t i = 1; i < lambdas_.size(); ++i) {
    if (lambdas_[i] < lambdas_[i - 1]) throw std::invalid_argument("Configuration: lambdas must be nondecreasing");
  }
  if (lambdas_.front() < params_.lambda_min()) {
    throw std::invalid_argument("Configuration: lambda_1 below lower bound");
  }
  if (lambdas_.back() > params_.lambda_max()) {
    throw std::invalid_argument("Configuration: lambda_N above upper bound");
  }
}

Eigen::VectorXd Configuration::positions() const {
  Eigen::VectorXd out(size());
  for (int i = 0; i < size(); ++i) out[i] = position(i);
  return out;
}

Configuration configuration_from_positions(const EnsembleParams& params, const std::vector<double>& positions) {
  Lambdas lambdas(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const double lam = positions[i] - params.origin() - params.theta * static_cast<double>(i + 1);
    if (!near_integer(lam)) {
      throw std::invalid_argument("configuration_from_positions: position " + std::to_string(positions[i]) +
                                  " is off the lattice");
    }
    lambdas[i] = static_cast<long>(std::round(lam));
  }
  return Configuration(params, std::move(lambdas));
}

double log_interaction(const Configuration& config) {
  const double theta = config.params().theta;
  const int n = config.size();
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double li = config.position(i);
    for (int j = i + 1; j < n; ++j) {
      const double gap = config.position(j) - li;
      // Gap ≥ θ on the lattice, so d + 1 − θ ≥ 1.
      if (!(gap + 1.0 - theta > 0.0)) throw std::domain_error("log_interaction: gap below theta");
      total += log_pair_interaction(gap, theta);
    }
  }
  return total;
}

double log_density_unnormalized(const Configuration& config, const WeightModel& weight) {
  double lw = 0.0;
  for (int i = 0; i < config.size(); ++i) {
    const double w = weight.log_w(config.position(i));
    if (w == kNegInf) return kNegInf;
    lw += w;
  }
  return log_interaction(config) + lw;
}

LambdaBox lambda_box_for_positions(const EnsembleParams& params, const PositionBox& box) {
  const double lo = std::ceil(static_cast<double>(box.lo) - params.origin() - params.theta - kLatticeTol);
  const double hi = std::floor(static_cast<double>(box.hi) - params.origin() -
                               params.theta * params.n_particles + kLatticeTol);
  return LambdaBox{std::max(static_cast<long>(lo), params.lambda_min()),
                   std::min(static_cast<long>(hi), params.lambda_max())};
}

EnumerationCapExceeded::EnumerationCapExceeded(double count, double cap)
    : std::runtime_error("enumeration needs " + std::to_string(count) + " configurations, cap is " +
                         std::to_string(cap)),
      count_(count) {}

namespace {

LambdaBox effective_box(const EnsembleParams& params, const LambdaBox& box) {
  return LambdaBox{std::max(box.lo, params.lambda_min()), std::min(box.hi, params.lambda_max())};
}

}  // namespace

double count_configurations(const EnsembleParams& params, const LambdaBox& box) {
  const LambdaBox eff = effective_box(params, box);
  if (eff.hi < eff.lo) return 0.0;
  // Multisets of size N from hi − lo + 1 values: C(hi − lo + N, N).
  const double span = static_cast<double>(eff.hi - eff.lo);
  double count = 1.0;
  for (int k = 1; k <= params.n_particles; ++k) count = count * (span + k) / k;
  return std::round(count);
}

void for_each_configuration(const EnsembleParams& params, const LambdaBox& box,
                            const std::function<void(const Lambdas&)>& visit, double cap) {
  params.validate();
  const double count = count_configurations(params, box);
  if (count > cap) throw EnumerationCapExceeded(count, cap);
  if (count == 0.0) return;
  const LambdaBox eff = effective_box(params, box);
  const auto n = static_cast<std::size_t>(params.n_particles);
  Lambdas lam(n, eff.lo);
  while (true) {
    visit(lam);
    // Odometer on nondecreasing tuples: bump the last position that can grow
    // and reset everything after it to the same value.
    std::size_t pos = n;
    while (pos > 0 && lam[pos - 1] == eff.hi) --pos;
    if (pos == 0) return;
    const long v = lam[pos - 1] + 1;
    for (std::size_t k = pos - 1; k < n; ++k) lam[k] = v;
  }
}

std::vector<Configuration> enumerate_configurations(const EnsembleParams& params, const LambdaBox& box,
                                                    double cap) {
  std::vector<Configuration> out;
  for_each_configuration(params, box, [&](const Lambdas& lam) { out.emplace_back(params, lam); }, cap);
  return out;
}

double ProbabilityTable::partition() const { return std::exp(log_partition); }

ProbabilityTable exact_distribution(const EnsembleParams& params, const WeightModel& weight,
                                    std::optional<LambdaBox> box, double cap) {
  const LambdaBox use = box ? *box : lambda_box_for_positions(params, weight.support_box());
  ProbabilityTable table{params, {}, {}, {}, 0.0};
  for_each_configuration(
      params, use,
      [&](const Lambdas& lam) {
        Configuration c(params, lam);
        const double lw = log_density_unnormalized(c, weight);
        if (lw == kNegInf) return;
        table.configurations.push_back(std::move(c));
        table.log_weights.push_back(lw);
      },
      cap);
  if (table.configurations.empty()) throw std::runtime_error("exact_distribution: no configuration has positive weight");
  const double peak = *std::max_element(table.log_weights.begin(), table.log_weights.end());
  double sum = 0.0;
  for (double lw : table.log_weights) sum += std::exp(lw - peak);
  table.log_partition = peak + std::log(sum);
  table.probabilities.reserve(table.log_weights.size());
  for (double lw : table.log_weights) table.probabilities.push_back(std::exp(lw - table.log_partition));
  return table;
}

std::complex<double> stieltjes_GN(const Configuration& config, std::complex<double> z) {
  const double n = config.size();
  std::complex<double> sum = 0.0;
  for (int i = 0; i < config.size(); ++i) {
    const std::complex<double> d = z - config.position(i) / n;
    if (std::abs(d) == 0.0) throw std::domain_error("stieltjes_GN: z sits on a particle");
    sum += 1.0 / d;
  }
  return sum / n;
}

HoleConfiguration holes_of(const Configuration& config, long m_max) {
  if (config.params().theta != 1.0) throw std::invalid_argument("holes_of: duality needs theta = 1");
  const long n = config.size();
  if (m_max - n + 1 <= 0) {
    throw std::invalid_argument("holes_of: degenerate instance, M - N + 1 = " + std::to_string(m_max - n + 1));
  }
  std::vector<bool> occupied(static_cast<std::size_t>(m_max + 1), false);
  for (int i = 0; i < config.size(); ++i) {
    const double x = config.position(i);
    if (x < 0.0 || x > static_cast<double>(m_max) || x != std::floor(x)) {
      throw std::invalid_argument("holes_of: particle outside {0..M}");
    }
    occupied[static_cast<std::size_t>(x)] = true;
  }
  HoleConfiguration h{m_max, {}};
  for (long x = 0; x <= m_max; ++x) {
    if (!occupied[static_cast<std::size_t>(x)]) h.holes.push_back(x);
  }
  return h;
}

Configuration particles_of(const HoleConfiguration& holes) {
  std::vector<bool> is_hole(static_cast<std::size_t>(holes.m_max + 1), false);
  for (long x : holes.holes) {
    if (x < 0 || x > holes.m_max) throw std::invalid_argument("particles_of: hole outside {0..M}");
    is_hole[static_cast<std::size_t>(x)] = true;
  }
  std::vector<double> pos;
  for (long x = 0; x <= holes.m_max; ++x) {
    if (!is_hole[static_cast<std::size_t>(x)]) pos.push_back(static_cast<double>(x));
  }
  if (pos.empty()) throw std::invalid_argument("particles_of: no particles left");
  return configuration_from_positions(EnsembleParams::krawtchouk(static_cast<int>(pos.size()), holes.m_max), pos);
}

double dual_log_weight(long x, const WeightModel& weight, long m_max) {
  if (x < 0 || x > m_max) throw std::out_of_range("dual_log_weight: x outside {0..M}");
  const double xd = static_cast<double>(x);
  // Π_{k≠x} |x − k| = x! (M − x)!
  return -weight.log_w(xd) - 2.0 * (std::lgamma(xd + 1.0) + std::lgamma(static_cast<double>(m_max - x) + 1.0));
}

WeightModel dual_weight(const WeightModel& weight, long m_max) {
  Tabulated t{0, {}};
  t.log_values.reserve(static_cast<std::size_t>(m_max + 1));
  for (long x = 0; x <= m_max; ++x) t.log_values.push_back(dual_log_weight(x, weight, m_max));
  return WeightModel(std::move(t));
}

std::vector<double> dual_empirical_sites(const Configuration& config) {
  const auto& p = config.params();
  if (!p.lower_bounded() || !p.upper_bounded()) {
    throw std::invalid_argument("dual_empirical_sites: needs finite a(N) and b(N)");
  }
  // Lower sentinel in position units: one lattice step below the first
  // admissible particle.
  const double left = p.position(0, p.lambda_min()) - 1.0;
  const double right = p.position(p.n_particles - 1, p.lambda_max()) + 1.0;
  std::vector<double> out;
  double prev = left;
  for (int i = 0; i <= config.size(); ++i) {
    const double next = i < config.size() ? config.position(i) : right;
    for (double x = prev + 1.0; x < next - kLatticeTol; x += 1.0) out.push_back(x);
    prev = next;
  }
  return out;
}

}  // namespace dbeta
