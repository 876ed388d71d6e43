#include "dbeta/jack.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "dbeta/equilibrium.hpp"

namespace dbeta {
namespace {

void partitions_rec(long remaining, long max_part, std::vector<long>& cur, std::vector<Partition>& out) {
  if (remaining == 0) {
    out.emplace_back(cur);
    return;
  }
  for (long p = std::min(remaining, max_part); p >= 1; --p) {
    cur.push_back(p);
    partitions_rec(remaining - p, p, cur, out);
    cur.pop_back();
  }
}

void check_theta(double theta) {
  if (!(theta > 0.0)) throw std::invalid_argument("jack: theta must be positive");
}

}  // namespace

Partition::Partition(std::vector<long> rows) : rows_(std::move(rows)) {
  while (!rows_.empty() && rows_.back() == 0) rows_.pop_back();
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i] < 0) throw std::invalid_argument("Partition: negative row");
    if (i > 0 && rows_[i] > rows_[i - 1]) throw std::invalid_argument("Partition: rows must be nonincreasing");
  }
}

long Partition::size() const { return std::accumulate(rows_.begin(), rows_.end(), 0L); }

Partition Partition::transpose() const {
  std::vector<long> t(rows_.empty() ? 0 : static_cast<std::size_t>(rows_.front()), 0);
  for (long r : rows_) {
    for (long j = 0; j < r; ++j) ++t[static_cast<std::size_t>(j)];
  }
  return Partition(std::move(t));
}

std::vector<Partition> partitions_of(int n) {
  if (n < 0) throw std::invalid_argument("partitions_of: negative n");
  std::vector<Partition> out;
  std::vector<long> cur;
  partitions_rec(n, n, cur, out);
  return out;
}

HookProducts hook_products_boxes(const Partition& lambda, double theta) {
  check_theta(theta);
  const Partition tr = lambda.transpose();
  HookProducts h;
  for (int i = 1; i <= lambda.length(); ++i) {
    for (long j = 1; j <= lambda.row(i); ++j) {
      const double arm = static_cast<double>(lambda.row(i) - j);
      const double leg = static_cast<double>(tr.row(static_cast<int>(j)) - i);
      h.log_H += std::log(arm + leg * theta + 1.0);
      h.log_H_prime += std::log(arm + leg * theta + theta);
    }
  }
  return h;
}

HookProducts hook_products_rows(const Partition& lambda, double theta) {
  check_theta(theta);
  const int l = lambda.length();
  HookProducts h;
  for (int i = 1; i <= l; ++i) {
    for (int j = i + 1; j <= l; ++j) {
      const double d = static_cast<double>(lambda.row(i) - lambda.row(j));
      const double k = j - i;
      h.log_H += std::lgamma(d + (k - 1.0) * theta + 1.0) - std::lgamma(d + k * theta + 1.0);
      h.log_H_prime += std::lgamma(d + k * theta) - std::lgamma(d + (k + 1.0) * theta);
    }
    const double x = static_cast<double>(lambda.row(i)) + (l - i) * theta;
    h.log_H += std::lgamma(x + 1.0);
    h.log_H_prime += std::lgamma(x + theta) - std::lgamma(theta);
  }
  return h;
}

double jack_plancherel_logprob(const Partition& lambda, long n, double theta) {
  if (lambda.size() != n) {
    throw std::invalid_argument("jack_plancherel_logprob: |λ| = " + std::to_string(lambda.size()) +
                                " but n = " + std::to_string(n));
  }
  const auto h = hook_products_rows(lambda, theta);
  return std::lgamma(static_cast<double>(n) + 1.0) + static_cast<double>(n) * std::log(theta) - h.log_H -
         h.log_H_prime;
}

VWProducts vw_products(const Partition& lambda, int m, double theta) {
  check_theta(theta);
  if (m < lambda.length()) throw std::invalid_argument("vw_products: m is below the number of rows");
  VWProducts v;
  for (int i = 1; i <= m; ++i) {
    for (int j = i + 1; j <= m; ++j) {
      const double d = static_cast<double>(lambda.row(i) - lambda.row(j));
      const double k = j - i;
      v.log_V += std::lgamma(d + k * theta + 1.0) + std::lgamma(d + (k + 1.0) * theta) -
                 std::lgamma(d + (k - 1.0) * theta + 1.0) - std::lgamma(d + k * theta);
    }
    const double x = static_cast<double>(lambda.row(i)) + (m - i) * theta;
    v.log_W += std::lgamma(theta) - std::lgamma(x + 1.0) - std::lgamma(x + theta);
  }
  return v;
}

double poissonized_jack_logprob(const Partition& lambda, double M, double theta) {
  if (!(M > 0.0)) throw std::invalid_argument("poissonized_jack_logprob: M must be positive");
  const auto v = vw_products(lambda, lambda.length(), theta);
  return -M + v.log_V + v.log_W + static_cast<double>(lambda.size()) * std::log(theta * M);
}

Configuration partition_to_config(const Partition& lambda, int n_particles, double theta) {
  if (n_particles < lambda.length()) {
    throw std::invalid_argument("partition_to_config: N = " + std::to_string(n_particles) + " is below the " +
                                std::to_string(lambda.length()) + " rows");
  }
  const auto params = EnsembleParams::jack(n_particles, theta);
  Lambdas lam(static_cast<std::size_t>(n_particles));
  // In λ-form the Jack lattice has ℓ_i = λ'_i − 1 + (i − 1)θ.
  for (int i = 1; i <= n_particles; ++i) lam[static_cast<std::size_t>(i - 1)] = lambda.row(n_particles - i + 1) + 1;
  return Configuration(params, std::move(lam));
}

Partition config_to_partition(const Configuration& config) {
  const auto expect = EnsembleParams::jack(config.size(), config.params().theta);
  if (!(config.params() == expect)) throw std::invalid_argument("config_to_partition: not a Jack configuration");
  const int n = config.size();
  std::vector<long> rows(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) rows[static_cast<std::size_t>(n - i)] = config.lambdas()[static_cast<std::size_t>(i - 1)] - 1;
  return Partition(std::move(rows));
}

double jack_row_statistic(long row, double M, double theta) {
  return std::pow(theta, -5.0 / 6.0) * std::cbrt(M) * (static_cast<double>(row) / std::sqrt(M) - 2.0 * std::sqrt(theta));
}

int jack_particle_count(double M, double c) { return static_cast<int>(std::ceil(c * std::sqrt(M))); }

JackBatch sample_poissonized_jack(double M, double theta, double c, long n_samples, std::uint64_t seed, int n_rows,
                                  long thin_sweeps, int n_chains, int workers) {
  const WeightModel weight{PoissonizedJack{M, theta, c}};
  const int n = jack_particle_count(M, c);
  if (n_rows < 1 || n_rows > n) throw std::invalid_argument("sample_poissonized_jack: n_rows outside [1, N]");
  if (thin_sweeps < 1) throw std::invalid_argument("sample_poissonized_jack: thin_sweeps must be positive");
  if (n_chains < 1) throw std::invalid_argument("sample_poissonized_jack: need at least one chain");
  const auto params = EnsembleParams::jack(n, theta);

  const auto eq = jack_equilibrium(theta, c);
  const auto mu = tabulate_measure([&](double x) { return eq.density(x); }, theta, {0.0, 1.0 + theta}, 2000, {},
                                   std::pair{eq.A, eq.B});
  const auto g = classical_locations(mu, n).gammas;
  const long per_chain = (n_samples + n_chains - 1) / n_chains;
  ChainSpec spec = ChainSpec::with_defaults(n, per_chain, seed,
                                            EquilibriumQuantiles{std::vector<double>(g.data(), g.data() + n)});
  spec.thin = thin_sweeps * n;
  spec.steps = spec.burn_in + spec.thin * per_chain;

  JackBatch out{run_chains(params, weight, spec, n_chains, workers), {}, {}};
  out.batch.configurations.erase(out.batch.configurations.begin() + n_samples, out.batch.configurations.end());
  out.row_statistics.assign(static_cast<std::size_t>(n_rows), {});
  for (const auto& conf : out.batch.configurations) {
    out.partitions.push_back(config_to_partition(conf));
    for (int k = 1; k <= n_rows; ++k) {
      out.row_statistics[static_cast<std::size_t>(k - 1)].push_back(
          jack_row_statistic(out.partitions.back().row(k), M, theta));
    }
  }
  return out;
}

}  // namespace dbeta
