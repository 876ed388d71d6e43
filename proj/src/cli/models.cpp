#include <cmath>

#include "dbeta/jack.hpp"
#include "internal.hpp"

namespace dbeta::cli {
namespace {

double poly(const std::vector<double>& c, double x) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
  return v;
}

}  // namespace

WeightModel parse_weight(const Node& w, int n_particles, double theta) {
  const std::string kind = w.choice("kind", {"krawtchouk", "poissonized_jack", "convex", "tabulated"});
  if (kind == "krawtchouk") return WeightModel(Krawtchouk{w.at_least("M", 0)});
  if (kind == "poissonized_jack") {
    const double t = w.positive("theta", theta);
    try {
      return WeightModel(PoissonizedJack{w.positive("M"), t, w.positive("c", 6.0)});
    } catch (const std::invalid_argument& e) {
      w.fail("c", e.what());
    }
  }
  if (kind == "convex") {
    const auto coeffs = w.get<std::vector<double>>("polynomial");
    if (coeffs.size() < 3) w.fail("polynomial", "need at least a quadratic term");
    ConvexPotential p;
    p.kappa = w.positive("kappa", 1.0);
    p.n_particles = n_particles;
    p.V = [coeffs](double x) { return poly(coeffs, x); };
    p.V_complex = [coeffs](std::complex<double> z) {
      std::complex<double> v = 0.0;
      for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * z + *it;
      return v;
    };
    if (w.has("box")) {
      const auto box = w.get<std::vector<long>>("box");
      if (box.size() != 2 || box[1] < box[0]) w.fail("box", "expected [lo, hi] with lo <= hi");
      p.box = {box[0], box[1]};
    } else {
      try {
        p.box = default_convex_box(p.V, p.kappa, theta, n_particles);
      } catch (const std::invalid_argument& e) {
        w.fail("polynomial", e.what());
      }
    }
    return WeightModel(std::move(p));
  }
  Tabulated t;
  if (w.has("csv")) {
    try {
      t = load_tabulated_csv(w.get<std::string>("csv"));
    } catch (const std::exception& e) {
      throw UsageError(w.path_of("csv") + ": " + e.what());
    }
  } else {
    t.first = w.get<long>("first");
    t.log_values = w.get<std::vector<double>>("log_values");
    if (t.log_values.empty()) w.fail("log_values", "must not be empty");
  }
  return WeightModel(std::move(t));
}

EnsembleParams parse_ensemble(const Node& e, const Node& w) {
  EnsembleParams p;
  p.theta = e.positive("theta");
  const std::string kind = w.get<std::string>("kind");
  if (kind == "poissonized_jack") {
    const double c = w.has("c") ? w.get<double>("c") : 6.0;
    p.n_particles = static_cast<int>(e.at_least("n", 1, jack_particle_count(w.positive("M"), c)));
  } else {
    p.n_particles = static_cast<int>(e.at_least("n", 1));
  }
  if (kind == "krawtchouk") {
    if (p.theta != 1.0) e.fail("theta", "the krawtchouk weight needs theta = 1");
    const auto d = EnsembleParams::krawtchouk(p.n_particles, w.get<long>("M"));
    p.a_lattice = e.get<double>("aN", d.a_lattice);
    p.b_lattice = e.get<double>("bN", d.b_lattice);
  } else if (kind == "poissonized_jack") {
    p.a_lattice = e.get<double>("aN", -1.0 - p.theta);
    if (e.has("bN")) p.b_lattice = e.get<double>("bN");
  } else {
    if (e.has("aN")) p.a_lattice = e.get<double>("aN");
    if (e.has("bN")) p.b_lattice = e.get<double>("bN");
  }
  try {
    p.validate();
  } catch (const std::exception& ex) {
    throw SchemaError(e.path(), ex.what());
  }
  return p;
}

json batch_weight_config(const json& manifest) {
  if (manifest.contains("weight_config")) return manifest.at("weight_config");
  throw UsageError("batch manifest has no weight_config; it was not written by `sample` or `jack`");
}

WeightModel weight_from_config(const json& cfg, const EnsembleParams& params) {
  json scratch;
  return parse_weight(Node(cfg, scratch, "weight_config"), params.n_particles, params.theta);
}

EquilibriumMeasure equilibrium_for(const WeightModel& weight, const EnsembleParams& params, int grid_n) {
  const double n = params.n_particles;
  const auto& v = weight.variant();
  if (const auto* k = std::get_if<Krawtchouk>(&v)) {
    const double m = static_cast<double>(k->M) / n;
    if (!(m > 1.0)) throw UsageError("equilibrium: krawtchouk needs M > N");
    return tabulate_measure([m](double x) { return krawtchouk_density(m, x); }, 1.0, {0.0, m}, grid_n,
                            [m](double u) { return krawtchouk_potential(m, u); }, krawtchouk_edges(m));
  }
  if (const auto* j = std::get_if<PoissonizedJack>(&v)) {
    const auto eq = jack_equilibrium(j->theta, j->c);
    return tabulate_measure([eq](double x) { return eq.density(x); }, j->theta, {0.0, 1.0 + j->theta}, grid_n,
                            [j](double x) { return jack_potential(j->theta, j->c, x); }, std::pair{eq.A, eq.B});
  }
  if (const auto* c = std::get_if<ConvexPotential>(&v)) {
    SolverOptions o;
    o.grid_n = grid_n;
    const auto V = c->V;
    const double kappa = c->kappa;
    return solve_constrained([V, kappa](double x) { return kappa * V(x); }, params.theta,
                             {static_cast<double>(c->box.lo) / n, static_cast<double>(c->box.hi) / n}, o);
  }
  throw UsageError("no equilibrium model for tabulated weights");
}

io::LoadedBatch load_input_batch(const Node& node, const std::string& key, const Context& ctx) {
  const fs::path dir = node.get<std::string>(key);
  std::error_code ec;
  if (fs::exists(ctx.target) && fs::equivalent(dir, ctx.target, ec)) {
    throw UsageError(node.path_of(key) + ": input batch must differ from the output directory");
  }
  if (!fs::is_directory(dir)) throw UsageError(node.path_of(key) + ": no such batch directory: " + dir.string());
  try {
    return io::load_batch(dir);
  } catch (const std::exception& e) {
    throw UsageError(node.path_of(key) + ": " + e.what());
  }
}

}  // namespace dbeta::cli
