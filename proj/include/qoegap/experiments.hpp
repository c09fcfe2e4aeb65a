#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qoegap/bounds.hpp"
#include "qoegap/distances.hpp"
#include "qoegap/fairness.hpp"
#include "qoegap/generators.hpp"
#include "qoegap/intervention.hpp"
#include "qoegap/spectral.hpp"

namespace qoegap {

// A generated graph reduced to its largest connected component.
struct GraphCase {
  std::string id;
  std::string model;
  GraphSpec spec;
  Graph graph;
  std::size_t raw_nodes = 0;
  std::size_t raw_edges = 0;
};

GraphCase materialize(const GraphSpec& spec, std::string id = {});
std::vector<GraphCase> materialize_all(std::span<const GraphSpec> specs);

// ---- analyze ----

struct AnalyzeConfig {
  SlaParams sla{2.0, 6.0};
  SolverOptions solver;
  BoundConstants constants;
  // Exact all-pairs work is used up to this many pairs, sampling beyond.
  std::uint64_t exact_pair_budget = 5'000'000;
  SampledFairnessOptions sampled;
  // r_star needs a BFS per node; skipped above this size in sampled mode.
  std::size_t r_star_node_limit = 20000;
};

struct AnalysisResult {
  std::string graph_id;
  std::string model;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t raw_n = 0;
  std::size_t raw_m = 0;
  SpectralSummary spectral;
  std::optional<Hop> r_star;
  std::optional<TailProfile> profile;
  FairnessReport fairness;
  std::optional<double> J;
  std::optional<Divergences> divergences;
  std::optional<BoundReport> bound;
  std::optional<double> j_bound;
  std::optional<Certificate> certificate;
  SlaParams sla;
  BoundConstants constants;
};

AnalysisResult analyze(const GraphCase& gc, const AnalyzeConfig& cfg);

// ---- envelope ----

struct EnvelopeConfig {
  std::vector<double> a_grid{0.5, 1.0, 2.0, 4.0};
  std::vector<double> h0_offsets{1, 2, 3, 4, 5, 6, 7, 8};
  FitOptions fit{.fit_families = {"er", "ws", "path"}};
  SolverOptions solver;
};

struct EnvelopeRow {
  std::string graph_id;
  std::string model;
  std::size_t n = 0;
  double lambda2 = 0.0;
  Hop r_star = 0;
  double a = 0.0;
  double h0 = 0.0;
  double H = 0.0;
  double gamma = 0.0;
  double x = 0.0;
  double I = 0.0;
  double ln_I = 0.0;
  double bound_I = 0.0;
  bool breach = false;
  bool fit_set = false;
};

struct TailCheck {
  std::string graph_id;
  std::string model;
  bool fit_set = false;
  std::size_t breaches = 0;
};

struct EnvelopeResult {
  BoundConstants constants;
  std::vector<EnvelopeRow> rows;
  std::vector<TailCheck> tails;
  std::size_t fit_points = 0;
  std::size_t fit_breaches = 0;
  std::size_t held_points = 0;
  std::size_t held_breaches = 0;

  double fit_breach_rate() const { return fit_points ? double(fit_breaches) / double(fit_points) : 0.0; }
  double held_breach_rate() const { return held_points ? double(held_breaches) / double(held_points) : 0.0; }
};

// Sweeps (graph, a, h0 = r_star + offset), fits (C, c) on the configured
// families and evaluates breaches everywhere.
EnvelopeResult run_envelope(std::span<const GraphCase> cases, const EnvelopeConfig& cfg);

// ER(200, 0.05), WS(200, 6, 0.1) and BA(200, 2) for seeds 1..3, plus P200.
std::vector<GraphSpec> default_envelope_specs();

// ---- certify ----

struct CertifyRow {
  std::string graph_id;
  std::string model;
  std::size_t n = 0;
  std::uint64_t M = 0;
  double I = 0.0;
  double J = 0.0;
  Certificate certificate;
  bool dominates = false;  // certificate.bound >= I
};

std::vector<CertifyRow> run_certify(std::span<const GraphCase> cases, const SlaParams& sla);

// ER(200, 0.05), BA(200, 2), WS(200, 6, 0.1) and P200, seed 1.
std::vector<GraphSpec> default_certify_specs();

// ---- intervene ----

struct InterventionRun {
  Strategy strategy = Strategy::kFiedler;
  std::vector<InterventionRecord> records;
};

std::vector<InterventionRun> run_intervene(const GraphCase& gc, std::span<const Strategy> strategies,
                                           const InterventionOptions& opts);

// ---- reverse design ----

struct ReverseConfig {
  double a = 2.0;
  std::vector<double> targets{0.05, 0.03, 0.02};
  double h0_step = 0.25;
  BoundConstants constants;
  SolverOptions solver;
  // Spectral-gap variant: fixed threshold h0 = r_star + lambda2_h0_offset,
  // Fiedler edges are added until I <= lambda2_target.
  double lambda2_target = 0.025;
  double lambda2_h0_offset = 1.0;
  std::size_t lambda2_max_steps = 200;
  double C_deg = 0.5;
};

struct ReverseH0Row {
  double target = 0.0;
  double h0_theory = 0.0;
  std::optional<double> h0_empirical;  // first scanned h0 with I <= target
  double I_at_empirical = 0.0;
  bool ordered = false;  // h0_empirical >= h0_theory
};

struct ReverseLambda2Result {
  double target = 0.0;
  double h0 = 0.0;
  double lambda2_initial = 0.0;
  double I_initial = 0.0;
  double requirement = 0.0;
  std::optional<double> crossing_lambda2;
  std::size_t steps = 0;
  std::vector<InterventionRecord> trajectory;
};

struct ReverseResult {
  std::string graph_id;
  double lambda2 = 0.0;
  Hop r_star = 0;
  std::uint64_t M = 0;
  std::vector<ReverseH0Row> rows;
  std::optional<ReverseLambda2Result> lambda2_run;
};

ReverseResult run_reverse(const GraphCase& gc, const ReverseConfig& cfg, bool with_lambda2_run = true);

// Measured I over h0 = step, 2 step, ... until I <= target; nullopt if the
// scan passes h0_max first.
std::optional<double> empirical_h0(const DistanceHistogram& hist, double a, double target, double step,
                                   double h0_max);

}  // namespace qoegap
