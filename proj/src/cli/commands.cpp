#include <algorithm>
#include <cmath>
#include <map>

#include "dbeta/determinantal.hpp"
#include "dbeta/gbe.hpp"
#include "dbeta/jack.hpp"
#include "dbeta/nekrasov.hpp"
#include "dbeta/render.hpp"
#include "dbeta/stats.hpp"
#include "internal.hpp"

namespace dbeta::cli {
namespace {

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

EdgeSide parse_side(const Node& n, const std::string& fallback = "left") {
  return n.choice("side", {"left", "right"}, fallback) == "left" ? EdgeSide::Left : EdgeSide::Right;
}

double total_variation(const ProbabilityTable& table, const std::vector<Configuration>& samples) {
  std::map<Lambdas, double> emp;
  for (const auto& c : samples) emp[c.lambdas()] += 1.0 / static_cast<double>(samples.size());
  double tv = 0.0;
  for (std::size_t k = 0; k < table.configurations.size(); ++k) {
    const auto it = emp.find(table.configurations[k].lambdas());
    const double q = it == emp.end() ? 0.0 : it->second;
    tv += std::abs(q - table.probabilities[k]);
    if (it != emp.end()) emp.erase(it);
  }
  for (const auto& [lam, q] : emp) tv += q;
  return 0.5 * tv;
}

ChainInit parse_init(const Node& chain, const EnsembleParams& params, const WeightModel& weight) {
  if (!chain.has("init")) {
    chain.set("init", "uniform-spread");
    return UniformSpread{};
  }
  const json& v = chain.raw("init");
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "uniform-spread") return UniformSpread{};
    if (s == "equilibrium-quantile") {
      const auto g = classical_locations(equilibrium_for(weight, params), params.n_particles).gammas;
      return EquilibriumQuantiles{to_vector(g)};
    }
    chain.fail("init", "expected uniform-spread, equilibrium-quantile or {\"lambdas\": [...]}");
  }
  if (v.is_object() && v.contains("lambdas")) {
    try {
      return Configuration(params, v.at("lambdas").get<Lambdas>());
    } catch (const std::exception& e) {
      chain.fail("init", std::string("bad configuration: ") + e.what());
    }
  }
  chain.fail("init", "expected uniform-spread, equilibrium-quantile or {\"lambdas\": [...]}");
}

/// Edge statistic of a batch against its own equilibrium measure.
struct BatchEdge {
  EquilibriumMeasure measure;
  Eigen::VectorXd gammas;
  double s = 1.0;
};

BatchEdge batch_edge(const io::LoadedBatch& lb, EdgeSide side, std::optional<double> s) {
  const auto weight = weight_from_config(batch_weight_config(lb.manifest), lb.batch.params);
  BatchEdge be{equilibrium_for(weight, lb.batch.params), {}, 1.0};
  be.gammas = classical_locations(be.measure, lb.batch.params.n_particles).gammas;
  be.s = s ? *s : edge_coefficient(be.measure, side);
  return be;
}

struct Reference {
  int n = 100;
  double beta = 2.0;
  long samples = 2000;
  EdgeReference kind = EdgeReference::Classical;
};

Reference parse_reference(const Node& r, double beta) {
  Reference ref;
  ref.n = static_cast<int>(r.at_least("n", 2, 100));
  ref.beta = r.positive("beta", beta);
  ref.samples = r.at_least("samples", 1, 2000);
  ref.kind = r.choice("reference", {"classical", "edge"}, "classical") == "classical" ? EdgeReference::Classical
                                                                                      : EdgeReference::Edge;
  return ref;
}

std::vector<double> reference_samples(const Reference& ref, int k, EdgeSide side, std::uint64_t seed, int workers) {
  GbeEdgeOptions o;
  o.k = k;
  o.side = side;
  o.reference = ref.kind;
  o.workers = workers;
  return gbe_edge_samples(ref.n, ref.beta, ref.samples, seed, o);
}

std::vector<double> observable(const SampleBatch& b, const std::string& which) {
  std::vector<double> out;
  out.reserve(b.configurations.size());
  for (const auto& c : b.configurations) {
    if (which == "l_max") {
      out.push_back(c.position(c.size() - 1));
    } else if (which == "l_min") {
      out.push_back(c.position(0));
    } else {
      out.push_back(c.positions().mean());
    }
  }
  return out;
}

}  // namespace

void cmd_sample(const Node& p, Context& ctx) {
  const Node w = p.object("weight");
  const Node e = p.object("ensemble");
  const EnsembleParams params = parse_ensemble(e, w);
  const WeightModel weight = parse_weight(w, params.n_particles, params.theta);
  if (const auto t = weight.required_theta(); t && *t != params.theta) {
    e.fail("theta", "weight requires theta = " + io::format_double(*t));
  }
  const long n_samples = p.at_least("n_samples", 1);
  const std::string method = p.choice("method", {"mcmc", "exact"}, "mcmc");

  SampleBatch batch;
  std::optional<ProbabilityTable> table;
  if (method == "exact") {
    table = exact_distribution(params, weight);
    batch = exact_sample(*table, n_samples, ctx.seed);
  } else {
    const Node c = p.section("chain");
    const long n = params.n_particles;
    const long chains = p.at_least("chains", 1, 1);
    ChainSpec spec;
    spec.burn_in = c.at_least("burn_in", 0, 100 * n * n);
    spec.thin = c.at_least("thin", 1, n);
    spec.seed = ctx.seed;
    spec.init = parse_init(c, params, weight);
    const long per_chain = (n_samples + chains - 1) / chains;
    spec.steps = spec.burn_in + spec.thin * per_chain;
    batch = run_chains(params, weight, spec, static_cast<int>(chains), ctx.workers);
    batch.configurations.erase(batch.configurations.begin() + n_samples, batch.configurations.end());
  }

  const Node checks = p.section("checks");
  if (checks.has("tv_max")) {
    if (!table) table = exact_distribution(params, weight);
    ctx.check("tv_max", total_variation(*table, batch.configurations), "<=", checks.get<double>("tv_max"));
  }
  if (table) ctx.write("probabilities.csv", io::probability_csv(*table));
  ctx.write("samples.csv", io::samples_csv(batch));
  ctx.manifest_extra.update(io::batch_manifest(batch));
  ctx.manifest_extra["weight_config"] = w.resolved();
  ctx.messages.push_back("recorded " + std::to_string(batch.configurations.size()) + " configurations, acceptance " +
                         io::format_double(batch.acceptance_rate));
}

void cmd_equilibrium(const Node& p, Context& ctx) {
  const Node m = p.object("model");
  const std::string kind = m.choice("kind", {"krawtchouk", "jack", "convex"});
  const std::string method = p.choice("method", {"solve", "closed-form"}, "solve");
  SolverOptions o;
  o.grid_n = ctx.grid_n ? *ctx.grid_n : static_cast<int>(p.at_least("grid_n", 10, 2000));
  o.tol = ctx.tol ? *ctx.tol : p.positive("tol", 1e-5);
  p.set("grid_n", o.grid_n);
  p.set("tol", o.tol);

  std::function<double(double)> V, closed;
  double theta = 1.0;
  Interval support;
  std::optional<std::pair<double, double>> edges;
  if (kind == "krawtchouk") {
    const double mm = m.positive("m");
    if (!(mm > 1.0)) m.fail("m", "must exceed 1");
    V = [mm](double u) { return krawtchouk_potential(mm, u); };
    closed = [mm](double x) { return krawtchouk_density(mm, x); };
    support = {0.0, mm};
    edges = krawtchouk_edges(mm);
  } else if (kind == "jack") {
    theta = m.positive("theta");
    const double c = m.positive("c");
    JackEquilibrium eq;
    try {
      eq = jack_equilibrium(theta, c);
    } catch (const std::invalid_argument& ex) {
      m.fail("c", ex.what());
    }
    V = [theta, c](double x) { return jack_potential(theta, c, x); };
    closed = [eq](double x) { return eq.density(x); };
    support = {0.0, 1.0 + theta};
    edges = std::pair{eq.A, eq.B};
  } else {
    theta = m.positive("theta");
    const auto coeffs = m.get<std::vector<double>>("polynomial");
    const auto sup = m.get<std::vector<double>>("support");
    if (sup.size() != 2 || !(sup[0] < sup[1])) m.fail("support", "expected [lo, hi] with lo < hi");
    const double kappa = m.positive("kappa", 1.0);
    V = [coeffs, kappa](double x) {
      double v = 0.0;
      for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * x + *it;
      return kappa * v;
    };
    support = {sup[0], sup[1]};
  }
  if (method == "closed-form" && !closed) p.fail("method", "no closed form for " + kind);

  const EquilibriumMeasure mu = method == "solve" ? solve_constrained(V, theta, support, o)
                                                  : tabulate_measure(closed, theta, support, o.grid_n, V, edges);
  ctx.write("measure.csv", io::measure_csv(mu));
  json side = io::measure_sidecar(mu);

  if (p.has("locations")) {
    const long n = p.at_least("locations", 1);
    const auto g = classical_locations(mu, static_cast<int>(n)).gammas;
    std::vector<std::vector<double>> rows;
    for (long i = 0; i < n; ++i) rows.push_back({static_cast<double>(i + 1), g[i]});
    ctx.write("locations.csv", io::csv_text({"index", "gamma"}, rows));
  }

  std::optional<double> sup_error;
  if (closed && edges) {
    const auto [A, B] = *edges;
    const double lo = A + 0.05 * (B - A), hi = B - 0.05 * (B - A);
    double err = 0.0;
    for (int i = 0; i < mu.size(); ++i) {
      if (mu.grid[i] >= lo && mu.grid[i] <= hi) err = std::max(err, std::abs(mu.density[i] - closed(mu.grid[i])));
    }
    sup_error = err;
    side["closed_form"] = {{"A", A}, {"B", B}, {"density_sup_error_mid90", err}};
  }
  ctx.write_json("measure.json", side);

  const Node ch = p.section("checks");
  if (ch.has("edges")) {
    const auto want = ch.get<std::vector<double>>("edges");
    if (want.size() != 2) ch.fail("edges", "expected [A, B]");
    const double tol = ch.positive("edge_tol", 1e-2);
    ctx.check("edges", std::max(std::abs(mu.A - want[0]), std::abs(mu.B - want[1])), "<=", tol);
  }
  if (ch.has("density_sup_max")) {
    if (!sup_error) ch.fail("density_sup_max", "needs a model with a closed form");
    ctx.check("density_sup_max", *sup_error, "<=", ch.get<double>("density_sup_max"));
  }
  if (ch.has("kkt_max")) ctx.check("kkt_max", mu.kkt_residual, "<=", ch.get<double>("kkt_max"));
  if (ch.has("taxonomy")) {
    const auto want = ch.get<std::vector<std::string>>("taxonomy");
    std::vector<std::string> got;
    for (const auto& r : mu.regions) got.push_back(to_string(r.kind));
    ctx.check("taxonomy", got == want ? 0.0 : 1.0, "<=", 0.0);
  }
  ctx.messages.push_back("edges " + io::format_double(mu.A) + " " + io::format_double(mu.B));
}

void cmd_nekrasov(const Node& p, Context& ctx) {
  const Node src = p.object("source");
  std::vector<cplx> xi;
  const Node x = p.object("xi");
  if (x.has("points")) {
    for (const auto& pt : x.get<std::vector<std::vector<double>>>("points")) {
      if (pt.size() != 2) x.fail("points", "each point is [re, im]");
      xi.emplace_back(pt[0], pt[1]);
    }
  } else {
    const Node c = x.object("circle");
    const auto centre = c.get<std::vector<double>>("centre");
    if (centre.size() != 2) c.fail("centre", "expected [re, im]");
    xi = circle_points({centre[0], centre[1]}, c.positive("radius"), static_cast<int>(c.at_least("n", 1)));
  }
  if (xi.empty()) x.fail("points", "no evaluation points");

  const Node r = p.section("residues");
  ResidueOptions ro;
  ro.n_check = static_cast<int>(r.at_least("n_check", 0, 8));
  ro.radius = r.positive("radius", 0.25);
  ro.nodes = static_cast<int>(r.at_least("nodes", 4, 16));
  ro.poles = r.get<std::vector<double>>("poles", {});

  NekrasovReport rep;
  if (src.has("batch")) {
    const auto lb = load_input_batch(src, "batch", ctx);
    const auto weight = weight_from_config(batch_weight_config(lb.manifest), lb.batch.params);
    rep = R_N_monte_carlo(lb.batch, psi_pair_for(weight), xi, ro);
  } else {
    const Node w = src.object("weight");
    const EnsembleParams params = parse_ensemble(src.object("ensemble"), w);
    const WeightModel weight = parse_weight(w, params.n_particles, params.theta);
    rep = R_N_exact_report(exact_distribution(params, weight), psi_pair_for(weight), xi, ro);
  }
  ctx.write_json("nekrasov.json", to_json(rep));
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < xi.size(); ++k) {
    rows.push_back({xi[k].real(), xi[k].imag(), rep.R_values[k].real(), rep.R_values[k].imag(), rep.R_stderr[k]});
  }
  ctx.write("R.csv", io::csv_text({"xi_re", "xi_im", "R_re", "R_im", "R_stderr"}, rows));

  const Node ch = p.section("checks");
  if (ch.has("fit_residual_max")) {
    if (!rep.fit) ch.fail("fit_residual_max", "no polynomial fit (too few points or non-polynomial psi)");
    ctx.check("fit_residual_max", rep.fit->residual, "<=", ch.get<double>("fit_residual_max"));
  }
  if (ch.has("constant")) {
    const double c = ch.get<double>("constant");
    double dev = 0.0;
    for (const auto& v : rep.R_values) dev = std::max(dev, std::abs(v - cplx(c, 0.0)));
    ctx.check("constant", dev, "<=", ch.positive("constant_tol", 1e-10));
  }
  if (ch.get<bool>("residues", false)) {
    long failed = 0;
    for (const auto& rc : rep.residue_checks) failed += !rc.pass;
    ctx.check("residues", static_cast<double>(failed), "<=", 0.0);
  }
}

void cmd_duality(const Node& p, Context& ctx) {
  const int n = static_cast<int>(p.at_least("n", 1));
  const long M = p.at_least("M", n);
  const double tol = p.positive("tol", 1e-10);
  const WeightModel w(Krawtchouk{M});
  const auto table = exact_distribution(EnsembleParams::krawtchouk(n, M), w);
  std::map<std::vector<long>, double> push;
  for (std::size_t k = 0; k < table.configurations.size(); ++k) {
    push[holes_of(table.configurations[k], M).holes] += table.probabilities[k];
  }
  const int nh = static_cast<int>(M - n + 1);
  double worst = 0.0;
  long compared = 0;
  if (nh == 0) {
    worst = push.size() == 1 ? std::abs(push.begin()->second - 1.0) : 1.0;
  } else {
    const auto dual = exact_distribution(EnsembleParams::krawtchouk(nh, M), dual_weight(w, M));
    if (dual.configurations.size() != push.size()) worst = 1.0;
    for (std::size_t k = 0; k < dual.configurations.size(); ++k) {
      std::vector<long> key;
      for (int i = 0; i < nh; ++i) key.push_back(static_cast<long>(dual.configurations[k].position(i)));
      const auto it = push.find(key);
      const double q = it == push.end() ? 0.0 : it->second;
      worst = std::max(worst, std::abs(q - dual.probabilities[k]) / dual.probabilities[k]);
      ++compared;
    }
    ctx.write("dual_probabilities.csv", io::probability_csv(dual));
  }
  ctx.write("probabilities.csv", io::probability_csv(table));
  const bool match = worst <= tol;
  ctx.write_json("duality.json", {{"n", n},
                                  {"M", M},
                                  {"holes", nh},
                                  {"configurations", compared},
                                  {"max_relative_error", worst},
                                  {"result", match ? "exact match" : "mismatch"}});
  ctx.check("duality", worst, "<=", tol);
  ctx.messages.push_back(match ? "exact match" : "mismatch: max relative error " + io::format_double(worst));
}

void cmd_rigidity(const Node& p, Context& ctx) {
  const auto lb = load_input_batch(p, "batch", ctx);
  const auto win = p.get<std::vector<double>>("window", {0.05, 0.95});
  if (win.size() != 2 || !(win[0] < win[1])) p.fail("window", "expected [lo, hi] with lo < hi");
  const double threshold = p.positive("threshold", 10.0);
  const auto weight = weight_from_config(batch_weight_config(lb.manifest), lb.batch.params);
  const auto g = classical_locations(equilibrium_for(weight, lb.batch.params), lb.batch.params.n_particles).gammas;
  const auto prof = rigidity_profile(lb.batch.configurations, g, {win[0], win[1]});
  std::vector<std::vector<double>> rows;
  for (std::size_t t = 0; t < prof.indices.size(); ++t) {
    rows.push_back({static_cast<double>(prof.indices[t]), prof.median[t], prof.q90[t], prof.q99[t]});
  }
  ctx.write("rigidity.csv", io::csv_text({"index", "median", "q90", "q99"}, rows));
  ctx.write("max_deviation_ecdf.csv", io::ecdf_csv(prof.max_deviation));
  const double frac = prof.fraction_below(threshold);
  ctx.write_json("rigidity.json", {{"n", prof.n},
                                   {"samples", prof.max_deviation.size()},
                                   {"threshold", threshold},
                                   {"fraction_below", frac},
                                   {"max_deviation_max", *std::max_element(prof.max_deviation.begin(),
                                                                           prof.max_deviation.end())}});
  const Node ch = p.section("checks");
  if (ch.has("min_fraction")) ctx.check("min_fraction", frac, ">=", ch.get<double>("min_fraction"));
  ctx.messages.push_back("fraction with max bulk D <= " + io::format_double(threshold) + ": " + io::format_double(frac));
}

void cmd_edge(const Node& p, Context& ctx) {
  const auto lb = load_input_batch(p, "batch", ctx);
  const EdgeSide side = parse_side(p);
  const auto ks = p.get<std::vector<int>>("k", {1});
  if (ks.empty()) p.fail("k", "must not be empty");
  std::optional<double> s;
  if (p.has("s")) s = p.positive("s");
  const auto be = batch_edge(lb, side, s);
  const double beta = 2.0 * lb.batch.params.theta;
  const auto ref_node = p.maybe_object("reference");
  std::optional<Reference> ref;
  if (ref_node) ref = parse_reference(*ref_node, beta);

  json report = {{"s", be.s}, {"side", side == EdgeSide::Left ? "left" : "right"}, {"k", json::array()}};
  const Node ch = p.section("checks");
  const bool has_ks = ch.has("ks_max");
  const double ks_max = has_ks ? ch.get<double>("ks_max") : 0.0;
  if (has_ks && !ref) ch.fail("ks_max", "needs a reference");
  for (std::size_t t = 0; t < ks.size(); ++t) {
    const int k = ks[t];
    if (k < 1 || k > lb.batch.params.n_particles) p.fail("k", "entries must lie in [1, N]");
    const auto e = rescale_edge(lb.batch.configurations, be.gammas, be.s, k, side);
    const std::string tag = "k" + std::to_string(k);
    ctx.write("edge_" + tag + ".csv", io::ecdf_csv(e.values));
    json entry = {{"k", k}, {"samples", e.values.size()}};
    if (ref) {
      const auto r = reference_samples(*ref, k, side, derive_seed(ctx.seed, 1000 + t), ctx.workers);
      ctx.write("gbe_" + tag + ".csv", io::ecdf_csv(r));
      const auto res = ks_distance(e.values, r);
      entry["ks"] = res.distance;
      if (has_ks) ctx.check("ks_max[" + tag + "]", res.distance, "<=", ks_max);
    }
    report["k"].push_back(entry);
  }
  ctx.write_json("edge.json", report);
}

void cmd_gaps(const Node& p, Context& ctx) {
  const auto lb = load_input_batch(p, "batch", ctx);
  const int k = static_cast<int>(p.at_least("k", 1, 1));
  if (k >= lb.batch.params.n_particles) p.fail("k", "must be below N");
  const double L = p.get<double>("L", 0.0);
  const double threshold = p.positive("threshold", 0.01);
  const auto g = gap_statistics(lb.batch.configurations, k, L);
  const double frac = g.fraction_below(threshold);
  ctx.write("gaps.csv", io::ecdf_csv(g.values));
  ctx.write_json("gaps.json",
                 {{"k", k}, {"L", g.L}, {"floor", g.floor}, {"threshold", threshold}, {"fraction_below", frac}});
  const Node ch = p.section("checks");
  if (ch.has("fraction_max")) ctx.check("fraction_max", frac, "<=", ch.get<double>("fraction_max"));
}

void cmd_gbe(const Node& p, Context& ctx) {
  const Reference ref = parse_reference(p, 2.0);
  const int k = static_cast<int>(p.at_least("k", 1, 1));
  if (k > ref.n) p.fail("k", "must not exceed n");
  const EdgeSide side = parse_side(p);
  const auto r = reference_samples(ref, k, side, ctx.seed, ctx.workers);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < r.size(); ++i) rows.push_back({static_cast<double>(i), r[i]});
  ctx.write("gbe_edge.csv", io::csv_text({"sample", "value"}, rows));
  ctx.write("gbe_edge_ecdf.csv", io::ecdf_csv(r));
  json report = {{"n", ref.n}, {"beta", ref.beta}, {"samples", ref.samples}, {"k", k}};
  const Node ch = p.section("checks");
  if (const auto pooled = p.maybe_object("pooled")) {
    const int pn = static_cast<int>(pooled->at_least("n", 2, 200));
    const long mats = pooled->at_least("matrices", 1, 500);
    const auto spec = gbe_pooled_spectrum(pn, ref.beta, mats, derive_seed(ctx.seed, 1));
    const double d = ks_one_sample(spec, semicircle_cdf).distance;
    report["semicircle_ks"] = d;
    if (ch.has("semicircle_ks_max")) ctx.check("semicircle_ks_max", d, "<=", ch.get<double>("semicircle_ks_max"));
  } else if (ch.has("semicircle_ks_max")) {
    ch.fail("semicircle_ks_max", "needs a pooled section");
  }
  ctx.write_json("gbe.json", report);
}

void cmd_jack(const Node& p, Context& ctx) {
  const double M = p.positive("M");
  const double theta = p.positive("theta");
  const double c = p.positive("c", 6.0);
  const long n = p.at_least("samples", 1);
  const int rows = static_cast<int>(p.at_least("rows", 1, 3));
  const long thin = p.at_least("thin_sweeps", 1, 1);
  const int chains = static_cast<int>(p.at_least("chains", 1, 1));
  JackBatch jb;
  try {
    jb = sample_poissonized_jack(M, theta, c, n, ctx.seed, rows, thin, chains, ctx.workers);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(p.path(), e.what());
  }
  json parts = json::array();
  for (const auto& q : jb.partitions) parts.push_back(q.rows());
  ctx.write_json("partitions.json", parts);
  std::vector<std::string> header{"sample"};
  for (int k = 1; k <= rows; ++k) header.push_back("row_" + std::to_string(k));
  std::vector<std::vector<double>> table;
  for (long s = 0; s < n; ++s) {
    std::vector<double> r{static_cast<double>(s)};
    for (int k = 0; k < rows; ++k) r.push_back(jb.row_statistics[k][s]);
    table.push_back(r);
  }
  ctx.write("row_statistics.csv", io::csv_text(header, table));
  ctx.write("row_1_ecdf.csv", io::ecdf_csv(jb.row_statistics[0]));
  ctx.write("samples.csv", io::samples_csv(jb.batch));
  ctx.manifest_extra.update(io::batch_manifest(jb.batch));
  ctx.manifest_extra["weight_config"] = {{"kind", "poissonized_jack"}, {"M", M}, {"theta", theta}, {"c", c}};

  const double bound = 2.0 * std::exp(1.0) * std::sqrt(M);
  long over = 0;
  for (const auto& q : jb.partitions) over += static_cast<double>(q.row(1)) >= bound;
  const double ldp = static_cast<double>(over) / static_cast<double>(n);
  json report = {{"N", jb.batch.params.n_particles}, {"ldp_frequency", ldp}};
  const Node ch = p.section("checks");
  if (const auto r = p.maybe_object("reference")) {
    const Reference ref = parse_reference(*r, 2.0 * theta);
    const auto g = reference_samples(ref, 1, EdgeSide::Right, derive_seed(ctx.seed, 1000), ctx.workers);
    ctx.write("gbe_k1.csv", io::ecdf_csv(g));
    const double d = ks_distance(jb.row_statistics[0], g).distance;
    report["ks"] = d;
    if (ch.has("ks_max")) ctx.check("ks_max", d, "<=", ch.get<double>("ks_max"));
  } else if (ch.has("ks_max")) {
    ch.fail("ks_max", "needs a reference");
  }
  if (ch.has("ldp_max")) ctx.check("ldp_max", ldp, "<=", ch.get<double>("ldp_max"));
  ctx.write_json("jack.json", report);
}

void cmd_compare(const Node& p, Context& ctx) {
  const auto a = load_input_batch(p, "a", ctx);
  const auto b = load_input_batch(p, "b", ctx);
  const std::string obs = p.choice("observable", {"l_max", "l_min", "mean"}, "l_max");
  const auto va = observable(a.batch, obs), vb = observable(b.batch, obs);
  const auto res = ks_distance(va, vb);
  ctx.write("a_ecdf.csv", io::ecdf_csv(va));
  ctx.write("b_ecdf.csv", io::ecdf_csv(vb));
  ctx.write_json("compare.json", {{"observable", obs}, {"ks", res.distance}, {"n_a", res.n_a}, {"n_b", res.n_b}});

  render::Plot plot{"ECDF of " + obs, obs, "F", {}, "data: a_ecdf.csv, b_ecdf.csv"};
  for (const auto& [label, v] : {std::pair{"a", va}, std::pair{"b", vb}}) {
    std::vector<double> xs, fs;
    for (const auto& [x, f] : Ecdf(v).steps()) xs.push_back(x), fs.push_back(f);
    plot.series.push_back({label, xs, fs, true});
  }
  ctx.write("compare.svg", render::line_chart(plot));
  const Node ch = p.section("checks");
  if (ch.has("ks_max")) ctx.check("ks_max", res.distance, "<=", ch.get<double>("ks_max"));
  ctx.messages.push_back("KS " + io::format_double(res.distance));
}

void cmd_render(const Node& p, Context& ctx) {
  const fs::path in = p.get<std::string>("input");
  std::error_code ec;
  if (fs::exists(ctx.target) && fs::equivalent(in, ctx.target, ec)) p.fail("input", "must differ from the output directory");
  try {
    for (const auto& f : render::render_directory(in, ctx.out)) ctx.artifacts.push_back(f.filename().string());
  } catch (const std::runtime_error& e) {
    throw UsageError(p.path_of("input") + ": " + e.what());
  }
}

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h{
      {"sample", cmd_sample},   {"equilibrium", cmd_equilibrium}, {"nekrasov", cmd_nekrasov},
      {"duality-check", cmd_duality}, {"rigidity", cmd_rigidity}, {"edge", cmd_edge},
      {"gaps", cmd_gaps},       {"gbe", cmd_gbe},                 {"jack", cmd_jack},
      {"compare", cmd_compare}, {"render", cmd_render}};
  return h;
}

}  // namespace dbeta::cli
