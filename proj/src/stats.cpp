#include "dbeta/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dbeta {
namespace {

void require_samples(const std::vector<Configuration>& samples, const char* who) {
  if (samples.empty()) throw std::invalid_argument(std::string(who) + ": no samples");
}

double quantile_of(std::vector<double> v, double q) {
  const auto idx = static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size()))) - 1;
  const auto k = std::min(idx, v.size() - 1);
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
  return v[k];
}

}  // namespace

Ecdf::Ecdf(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("Ecdf: empty sample");
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("Ecdf: non-finite value");
  }
  std::sort(values_.begin(), values_.end());
}

double Ecdf::operator()(double x) const {
  const auto it = std::upper_bound(values_.begin(), values_.end(), x);
  return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
}

std::vector<std::pair<double, double>> Ecdf::steps() const {
  std::vector<std::pair<double, double>> out;
  const double n = static_cast<double>(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (i + 1 < values_.size() && values_[i + 1] == values_[i]) continue;
    out.emplace_back(values_[i], static_cast<double>(i + 1) / n);
  }
  return out;
}

KSResult ks_distance(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_distance: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() || j < b.size()) {
    double x;
    if (j == b.size() || (i < a.size() && a[i] <= b[j])) {
      x = a[i];
    } else {
      x = b[j];
    }
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return {d, static_cast<long>(a.size()), static_cast<long>(b.size())};
}

KSResult ks_one_sample(std::vector<double> values, const std::function<double(double)>& cdf) {
  if (values.empty()) throw std::invalid_argument("ks_one_sample: empty sample");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < values.size()) {
    const double x = values[i];
    const double below = static_cast<double>(i) / n;
    while (i < values.size() && values[i] == x) ++i;
    const double f = cdf(x);
    d = std::max({d, std::abs(f - below), std::abs(static_cast<double>(i) / n - f)});
  }
  return {d, static_cast<long>(values.size()), 0};
}

KSResult ks_distance_to_law(const std::vector<double>& atoms, const std::vector<double>& cdf,
                            std::vector<double> values) {
  if (atoms.empty() || atoms.size() != cdf.size()) throw std::invalid_argument("ks_distance_to_law: bad law");
  if (!std::is_sorted(atoms.begin(), atoms.end())) throw std::invalid_argument("ks_distance_to_law: atoms unsorted");
  const Ecdf fn(std::move(values));
  auto law = [&](double x) {
    const auto it = std::upper_bound(atoms.begin(), atoms.end(), x);
    return it == atoms.begin() ? 0.0 : cdf[static_cast<std::size_t>(it - atoms.begin() - 1)];
  };
  // Both are right-continuous steps, so the supremum sits at a jump of one.
  double d = 0.0;
  for (double x : atoms) d = std::max(d, std::abs(law(x) - fn(x)));
  for (double x : fn.sorted()) d = std::max(d, std::abs(law(x) - fn(x)));
  return {d, static_cast<long>(fn.size()), 0};
}

double RigidityProfile::fraction_below(double threshold) const {
  if (max_deviation.empty()) return 0.0;
  const auto c = std::count_if(max_deviation.begin(), max_deviation.end(), [&](double d) { return d <= threshold; });
  return static_cast<double>(c) / static_cast<double>(max_deviation.size());
}

RigidityProfile rigidity_profile(const std::vector<Configuration>& samples, const Eigen::VectorXd& gammas,
                                 BulkWindow window) {
  require_samples(samples, "rigidity_profile");
  const int n = samples.front().size();
  if (gammas.size() != n) throw std::invalid_argument("rigidity_profile: gammas and samples differ in N");
  const int lo = std::max(1, static_cast<int>(std::ceil(window.lo * n)));
  const int hi = std::min(n, static_cast<int>(std::floor(window.hi * n)));
  if (hi < lo) throw std::invalid_argument("rigidity_profile: empty bulk window");

  RigidityProfile p;
  p.n = n;
  for (int i = lo; i <= hi; ++i) p.indices.push_back(i);
  const double N = n;
  std::vector<std::vector<double>> per_index(p.indices.size());
  for (const auto& c : samples) {
    if (c.size() != n) throw std::invalid_argument("rigidity_profile: samples differ in N");
    double worst = 0.0;
    for (std::size_t t = 0; t < p.indices.size(); ++t) {
      const int i = p.indices[t];
      const double scale = std::pow(N, 2.0 / 3.0) * std::cbrt(static_cast<double>(std::min(i, n - i + 1)));
      const double d = scale * std::abs(c.position(i - 1) / N - gammas[i - 1]);
      per_index[t].push_back(d);
      worst = std::max(worst, d);
    }
    p.max_deviation.push_back(worst);
  }
  for (const auto& v : per_index) {
    p.median.push_back(quantile_of(v, 0.5));
    p.q90.push_back(quantile_of(v, 0.9));
    p.q99.push_back(quantile_of(v, 0.99));
  }
  return p;
}

EdgeStatistics rescale_edge(const std::vector<Configuration>& samples, const Eigen::VectorXd& gammas, double s, int k,
                            EdgeSide side) {
  require_samples(samples, "rescale_edge");
  if (!(s > 0.0)) throw std::invalid_argument("rescale_edge: s must be positive");
  const int n = samples.front().size();
  if (gammas.size() != n) throw std::invalid_argument("rescale_edge: gammas and samples differ in N");
  if (k < 1 || k > n) throw std::invalid_argument("rescale_edge: k outside [1, N]");
  const int j = side == EdgeSide::Left ? k - 1 : n - k;
  const double N = n;
  const double pre = std::pow(N, 2.0 / 3.0) * std::cbrt(static_cast<double>(k)) * std::pow(s, 2.0 / 3.0);
  EdgeStatistics e{{}, n, k, s, side};
  e.values.reserve(samples.size());
  for (const auto& c : samples) {
    if (c.size() != n) throw std::invalid_argument("rescale_edge: samples differ in N");
    e.values.push_back(pre * (c.position(j) / N - gammas[j]));
  }
  return e;
}

std::vector<EdgeStatistics> rescale_edge(const std::vector<Configuration>& samples, const Eigen::VectorXd& gammas,
                                         double s, const std::vector<int>& ks, EdgeSide side) {
  std::vector<EdgeStatistics> out;
  for (int k : ks) out.push_back(rescale_edge(samples, gammas, s, k, side));
  return out;
}

double GapStatistics::fraction_below(double x) const {
  const auto c = std::count_if(values.begin(), values.end(), [&](double v) { return v < x; });
  return values.empty() ? 0.0 : static_cast<double>(c) / static_cast<double>(values.size());
}

GapStatistics gap_statistics(const std::vector<Configuration>& samples, int k, double L) {
  require_samples(samples, "gap_statistics");
  const int n = samples.front().size();
  if (k < 1 || k >= n) throw std::invalid_argument("gap_statistics: need 1 <= k < N");
  const double N = n;
  if (L <= 0.0) L = std::pow(N, 0.25);
  const double scale = std::cbrt(L) / std::cbrt(N);
  GapStatistics g{{}, n, k, L, samples.front().params().theta * scale};
  for (const auto& c : samples) g.values.push_back((c.position(k) - c.position(k - 1)) * scale);
  return g;
}

}  // namespace dbeta
