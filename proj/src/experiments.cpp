#include "qoegap/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <tuple>

namespace qoegap {

GraphCase materialize(const GraphSpec& spec, std::string id) {
  GraphCase gc;
  gc.spec = spec;
  gc.model = to_string(spec.model);
  gc.id = id.empty() ? spec.to_string() : std::move(id);
  Graph raw = generate(spec);
  gc.raw_nodes = raw.node_count();
  gc.raw_edges = raw.edge_count();
  gc.graph = is_connected(raw) ? std::move(raw) : largest_connected_component(raw).graph;
  return gc;
}

std::vector<GraphCase> materialize_all(std::span<const GraphSpec> specs) {
  std::vector<std::future<GraphCase>> jobs;
  jobs.reserve(specs.size());
  for (const auto& s : specs) jobs.push_back(std::async(std::launch::async, [&s] { return materialize(s); }));
  std::vector<GraphCase> out;
  out.reserve(specs.size());
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

AnalysisResult analyze(const GraphCase& gc, const AnalyzeConfig& cfg) {
  cfg.sla.validate();
  cfg.constants.validate();
  AnalysisResult r;
  r.graph_id = gc.id;
  r.model = gc.model;
  r.seed = gc.spec.seed;
  r.n = gc.graph.node_count();
  r.m = gc.graph.edge_count();
  r.raw_n = gc.raw_nodes;
  r.raw_m = gc.raw_edges;
  r.sla = cfg.sla;
  r.constants = cfg.constants;
  r.spectral = spectral_gap(gc.graph, cfg.solver);

  const std::uint64_t M = pair_count(r.n);
  if (M <= cfg.exact_pair_budget) {
    const auto hist = distance_histogram_exact(gc.graph);
    r.profile = tail_profile(gc.graph, hist);
    r.r_star = r.profile->r_star;
    r.fairness = imbalance_index(hist, cfg.sla);
    r.J = average_tail_J(hist, cfg.sla);
    r.divergences = divergences_vs_uniform(hist, cfg.sla);
    if (cfg.sla.h0 >= 1.0) r.certificate = data_driven_certificate(*r.profile, cfg.sla, static_cast<double>(M));
  } else {
    r.fairness = imbalance_index_sampled(gc.graph, cfg.sla, cfg.sampled);
    if (r.n <= cfg.r_star_node_limit) r.r_star = r_star_mixing_radius(gc.graph);
  }
  if (r.r_star && M >= 2) {
    r.bound = spectral_upper_bound(r.spectral.lambda2, *r.r_star, cfg.sla, static_cast<double>(M), cfg.constants);
    if (r.bound->applicable) r.j_bound = j_exponential_bound(r.spectral.lambda2, *r.r_star, cfg.sla, cfg.constants);
  }
  return r;
}

namespace {

struct GraphStats {
  DistanceHistogram hist;
  TailProfile profile;
  double lambda2 = 0.0;
};

std::vector<GraphStats> graph_stats(std::span<const GraphCase> cases, const SolverOptions& solver) {
  std::vector<std::future<GraphStats>> jobs;
  for (const auto& gc : cases) {
    jobs.push_back(std::async(std::launch::async, [&gc, &solver] {
      GraphStats s;
      s.hist = distance_histogram_exact(gc.graph);
      s.profile = tail_profile(gc.graph, s.hist);
      s.lambda2 = spectral_gap(gc.graph, solver).lambda2;
      return s;
    }));
  }
  std::vector<GraphStats> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

}  // namespace

EnvelopeResult run_envelope(std::span<const GraphCase> cases, const EnvelopeConfig& cfg) {
  if (cases.empty()) throw InputError("envelope: no graphs");
  if (cfg.a_grid.empty() || cfg.h0_offsets.empty()) throw InputError("envelope: SLA grids must be non-empty");
  const auto stats = graph_stats(cases, cfg.solver);

  std::vector<Observation> obs;
  std::vector<EnvelopeRow> rows;
  for (std::size_t g = 0; g < cases.size(); ++g) {
    const auto& gc = cases[g];
    const auto& st = stats[g];
    const double M = static_cast<double>(st.hist.pair_count);
    for (double a : cfg.a_grid) {
      for (double off : cfg.h0_offsets) {
        const SlaParams sla{a, st.profile.r_star + off};
        EnvelopeRow row;
        row.graph_id = gc.id;
        row.model = gc.model;
        row.n = gc.graph.node_count();
        row.lambda2 = st.lambda2;
        row.r_star = st.profile.r_star;
        row.a = a;
        row.h0 = sla.h0;
        row.H = off;
        row.I = imbalance_index(st.hist, sla).I;
        row.ln_I = row.I > 0.0 ? std::log(row.I) : -std::numeric_limits<double>::infinity();
        rows.push_back(row);
        obs.push_back({row.I, st.lambda2, static_cast<double>(row.r_star), a, sla.h0, M, gc.model});
      }
    }
  }

  EnvelopeResult res;
  res.constants = fit_constants(obs, cfg.fit);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto& row = rows[i];
    const auto rep = spectral_upper_bound(row.lambda2, row.r_star, {row.a, row.h0}, obs[i].M, res.constants);
    row.gamma = rep.gamma;
    row.x = rep.gamma * row.H;
    row.bound_I = rep.bound_I.value_or(std::numeric_limits<double>::infinity());
    row.breach = row.I > row.bound_I;
    row.fit_set = cfg.fit.fit_families.empty() ||
                  std::find(cfg.fit.fit_families.begin(), cfg.fit.fit_families.end(), row.model) !=
                      cfg.fit.fit_families.end();
    if (row.fit_set) {
      ++res.fit_points;
      res.fit_breaches += row.breach;
    } else {
      ++res.held_points;
      res.held_breaches += row.breach;
    }
  }
  res.rows = std::move(rows);
  std::stable_sort(res.rows.begin(), res.rows.end(), [](const EnvelopeRow& x, const EnvelopeRow& y) {
    return std::tie(x.graph_id, x.a, x.h0) < std::tie(y.graph_id, y.a, y.h0);
  });

  for (std::size_t g = 0; g < cases.size(); ++g) {
    TailCheck tc;
    tc.graph_id = cases[g].id;
    tc.model = cases[g].model;
    tc.fit_set = cfg.fit.fit_families.empty() ||
                 std::find(cfg.fit.fit_families.begin(), cfg.fit.fit_families.end(), tc.model) !=
                     cfg.fit.fit_families.end();
    tc.breaches = tail_envelope_check(stats[g].profile, stats[g].lambda2, res.constants).breaches;
    res.tails.push_back(tc);
  }
  return res;
}

std::vector<GraphSpec> default_envelope_specs() {
  std::vector<GraphSpec> specs;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    specs.push_back(er_spec(200, 0.05, seed));
    specs.push_back(ws_spec(200, 6, 0.1, seed));
    specs.push_back(ba_spec(200, 2, seed));
  }
  specs.push_back(path_spec(200));
  return specs;
}

std::vector<CertifyRow> run_certify(std::span<const GraphCase> cases, const SlaParams& sla) {
  sla.validate();
  std::vector<CertifyRow> rows;
  for (const auto& gc : cases) {
    const auto hist = distance_histogram_exact(gc.graph);
    const auto profile = tail_profile(gc.graph, hist);
    CertifyRow row;
    row.graph_id = gc.id;
    row.model = gc.model;
    row.n = gc.graph.node_count();
    row.M = hist.pair_count;
    row.I = imbalance_index(hist, sla).I;
    row.J = average_tail_J(hist, sla);
    row.certificate = data_driven_certificate(profile, sla, static_cast<double>(row.M));
    row.dominates = row.certificate.bound >= row.I;
    rows.push_back(row);
  }
  return rows;
}

std::vector<GraphSpec> default_certify_specs() {
  return {er_spec(200, 0.05, 1), ba_spec(200, 2, 1), ws_spec(200, 6, 0.1, 1), path_spec(200)};
}

std::vector<InterventionRun> run_intervene(const GraphCase& gc, std::span<const Strategy> strategies,
                                           const InterventionOptions& opts) {
  std::vector<std::future<InterventionRun>> jobs;
  for (Strategy s : strategies) {
    jobs.push_back(std::async(std::launch::async, [&gc, &opts, s] {
      return InterventionRun{s, run_intervention(gc.graph, s, opts)};
    }));
  }
  std::vector<InterventionRun> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

std::optional<double> empirical_h0(const DistanceHistogram& hist, double a, double target, double step,
                                   double h0_max) {
  if (!(step > 0.0)) throw InputError("empirical_h0: step must be positive");
  for (std::size_t i = 1;; ++i) {
    const double h0 = step * static_cast<double>(i);
    if (h0 > h0_max) return std::nullopt;
    if (imbalance_index(hist, {a, h0}).I <= target) return h0;
  }
}

ReverseResult run_reverse(const GraphCase& gc, const ReverseConfig& cfg, bool with_lambda2_run) {
  if (cfg.targets.empty()) throw InputError("reverse: no targets");
  const auto hist = distance_histogram_exact(gc.graph);
  const auto profile = tail_profile(gc.graph, hist);
  const auto spec = spectral_gap(gc.graph, cfg.solver);
  ReverseResult res;
  res.graph_id = gc.id;
  res.lambda2 = spec.lambda2;
  res.r_star = profile.r_star;
  res.M = hist.pair_count;
  const double M = static_cast<double>(res.M);
  // Far enough that every weight is within e^{-a * 40} of one.
  const double h0_max = static_cast<double>(hist.max_distance()) + 40.0 / cfg.a + 1.0;

  for (double target : cfg.targets) {
    ReverseH0Row row;
    row.target = target;
    row.h0_theory = reverse_design_h0(target, res.lambda2, res.r_star, cfg.a, M, cfg.constants);
    row.h0_empirical = empirical_h0(hist, cfg.a, target, cfg.h0_step, std::max(h0_max, row.h0_theory + 1.0));
    if (row.h0_empirical) {
      row.I_at_empirical = imbalance_index(hist, {cfg.a, *row.h0_empirical}).I;
      row.ordered = *row.h0_empirical >= row.h0_theory;
    }
    res.rows.push_back(row);
  }

  if (with_lambda2_run) {
    ReverseLambda2Result lr;
    lr.target = cfg.lambda2_target;
    lr.h0 = res.r_star + cfg.lambda2_h0_offset;
    lr.lambda2_initial = res.lambda2;
    lr.requirement = reverse_design_lambda2(lr.target, lr.h0, res.r_star, M, cfg.constants);
    InterventionOptions io;
    io.steps = cfg.lambda2_max_steps;
    io.sla = {cfg.a, lr.h0};
    io.solver = cfg.solver;
    io.C_deg = cfg.C_deg;
    io.stop_at_I = lr.target;
    const auto records = run_intervention(gc.graph, Strategy::kFiedler, io);
    lr.I_initial = records.front().I_after;
    for (const auto& rec : records) {
      lr.trajectory.push_back(rec);
      if (rec.I_after <= lr.target) {
        lr.crossing_lambda2 = rec.lambda2_after;
        lr.steps = rec.step;
        break;
      }
    }
    if (!lr.crossing_lambda2) lr.steps = records.back().step;
    res.lambda2_run = std::move(lr);
  }
  return res;
}

}  // namespace qoegap
