#include "dbeta/weights.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "dbeta/special.hpp"

namespace dbeta {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool is_integer(double x) { return x == std::floor(x); }

double tabulated_at(const Tabulated& t, double x) {
  if (!is_integer(x)) return kNegInf;
  const long idx = static_cast<long>(x) - t.first;
  if (idx < 0 || idx >= static_cast<long>(t.log_values.size())) return kNegInf;
  return t.log_values[static_cast<std::size_t>(idx)];
}

}  // namespace

WeightModel::WeightModel(Krawtchouk k) : model_(k) {
  if (k.M < 0) throw std::invalid_argument("Krawtchouk: M must be nonnegative");
}

WeightModel::WeightModel(ConvexPotential p) : model_(std::move(p)) {
  const auto& c = std::get<ConvexPotential>(model_);
  if (!(c.kappa > 0.0)) throw std::invalid_argument("ConvexPotential: kappa must be positive");
  if (c.n_particles < 1) throw std::invalid_argument("ConvexPotential: n_particles must be positive");
  if (!c.V) throw std::invalid_argument("ConvexPotential: V is empty");
  if (c.box.hi < c.box.lo) throw std::invalid_argument("ConvexPotential: empty box");
}

WeightModel::WeightModel(PoissonizedJack j) : model_(j) {
  if (!(j.theta > 0.0)) throw std::invalid_argument("PoissonizedJack: theta must be positive");
  if (!(j.M > 0.0)) throw std::invalid_argument("PoissonizedJack: M must be positive");
  const double bound = 2.0 * std::exp(1.0) * std::max(std::sqrt(j.theta), 1.0 / std::sqrt(j.theta));
  if (j.c < bound) {
    throw std::invalid_argument("PoissonizedJack: c = " + std::to_string(j.c) +
                                " is below 2e*max(sqrt(theta), 1/sqrt(theta)) = " +
                                std::to_string(bound));
  }
}

WeightModel::WeightModel(Tabulated t) : model_(std::move(t)) {
  if (std::get<Tabulated>(model_).log_values.empty()) {
    throw std::invalid_argument("Tabulated: no values");
  }
}

std::string WeightModel::kind() const {
  return std::visit(Overloaded{[](const Krawtchouk&) { return std::string("krawtchouk"); },
                               [](const ConvexPotential&) { return std::string("convex"); },
                               [](const PoissonizedJack&) { return std::string("poissonized_jack"); },
                               [](const Tabulated&) { return std::string("tabulated"); }},
                    model_);
}

double WeightModel::log_w(double x) const {
  return std::visit(
      Overloaded{
          [x](const Krawtchouk& k) { return log_binomial(static_cast<double>(k.M), x); },
          [x](const ConvexPotential& p) {
            if (!p.box.contains(x)) return kNegInf;
            const double n = static_cast<double>(p.n_particles);
            return -p.kappa * n * p.V(x / n);
          },
          [x](const PoissonizedJack& j) {
            if (x < 0.0) return kNegInf;
            return x * std::log(j.theta * j.M) - std::lgamma(x + 1.0) - std::lgamma(x + j.theta);
          },
          [x](const Tabulated& t) { return tabulated_at(t, x); }},
      model_);
}

PsiRatio WeightModel::psi_ratio(double x) const {
  return std::visit(
      Overloaded{
          [x](const Krawtchouk& k) { return PsiRatio{static_cast<double>(k.M) - x + 1.0, x}; },
          [x](const ConvexPotential& p) {
            const double n = static_cast<double>(p.n_particles);
            return PsiRatio{std::exp(p.kappa * n * (p.V((x - 1.0) / n) - p.V(x / n))), 1.0};
          },
          [x](const PoissonizedJack& j) { return PsiRatio{j.theta * j.M, x * (x + j.theta - 1.0)}; },
          [x](const Tabulated& t) {
            const double here = tabulated_at(t, x);
            const double prev = tabulated_at(t, x - 1.0);
            const bool in_here = here != kNegInf;
            const bool in_prev = prev != kNegInf;
            if (in_here && in_prev) return PsiRatio{std::exp(here - prev), 1.0};
            if (in_here) return PsiRatio{1.0, 0.0};
            return PsiRatio{0.0, 1.0};
          }},
      model_);
}

PositionBox WeightModel::support_box() const {
  return std::visit(
      Overloaded{[](const Krawtchouk& k) { return PositionBox{0, k.M}; },
                 [](const ConvexPotential& p) { return p.box; },
                 [](const PoissonizedJack& j) {
                   const double n = std::ceil(j.c * std::sqrt(j.M));
                   return PositionBox{0, static_cast<long>(std::ceil(n * (1.0 + j.theta)))};
                 },
                 [](const Tabulated& t) {
                   return PositionBox{t.first, t.first + static_cast<long>(t.log_values.size()) - 1};
                 }},
      model_);
}

std::optional<double> WeightModel::required_theta() const {
  if (std::holds_alternative<Krawtchouk>(model_)) return 1.0;
  if (const auto* j = std::get_if<PoissonizedJack>(&model_)) return j->theta;
  return std::nullopt;
}

PositionBox default_convex_box(const std::function<double(double)>& V, double kappa,
                               double theta, long n_particles) {
  const double v0 = V(0.0);
  for (long L = 1; L < 1000000; ++L) {
    const double u = static_cast<double>(L);
    const double need = 8.0 * theta * (1.0 + std::log1p(u));
    if (kappa * (V(u) - v0) >= need && kappa * (V(-u) - v0) >= need) {
      return PositionBox{-L * n_particles, L * n_particles};
    }
  }
  throw std::invalid_argument("default_convex_box: potential does not grow fast enough");
}

nlohmann::json describe_weight(const WeightModel& weight) {
  return std::visit(
      Overloaded{[](const Krawtchouk& k) { return nlohmann::json{{"kind", "krawtchouk"}, {"M", k.M}}; },
                 [](const ConvexPotential& p) {
                   return nlohmann::json{{"kind", "convex"},
                                         {"kappa", p.kappa},
                                         {"n_particles", p.n_particles},
                                         {"box", {p.box.lo, p.box.hi}}};
                 },
                 [](const PoissonizedJack& j) {
                   return nlohmann::json{{"kind", "poissonized_jack"}, {"M", j.M}, {"theta", j.theta}, {"c", j.c}};
                 },
                 [](const Tabulated& t) {
                   return nlohmann::json{{"kind", "tabulated"}, {"first", t.first}, {"log_values", t.log_values}};
                 }},
      weight.variant());
}

Tabulated load_tabulated_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open tabulated weight file: " + path);
  std::string line;
  std::getline(in, line);  // header
  Tabulated t;
  bool first = true;
  long expected = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string xs, ws;
    if (!std::getline(row, xs, ',') || !std::getline(row, ws, ',')) {
      throw std::runtime_error("malformed row in " + path + ": " + line);
    }
    const long x = std::stol(xs);
    const double w = ws == "-inf" ? kNegInf : std::stod(ws);
    if (first) {
      t.first = x;
      expected = x;
      first = false;
    }
    if (x != expected) throw std::runtime_error("tabulated weight: x values must be consecutive");
    t.log_values.push_back(w);
    ++expected;
  }
  if (t.log_values.empty()) throw std::runtime_error("tabulated weight file is empty: " + path);
  return t;
}

}  // namespace dbeta
