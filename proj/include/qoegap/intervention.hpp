#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "qoegap/fairness.hpp"
#include "qoegap/graph.hpp"
#include "qoegap/spectral.hpp"

namespace qoegap {

enum class Strategy { kFiedler, kRandom, kMinDegree, kBetweenness };

const char* to_string(Strategy s);
// Accepts "fiedler", "random", "min_degree", "betweenness".
Strategy parse_strategy(std::string_view name);

inline constexpr Strategy kAllStrategies[] = {Strategy::kFiedler, Strategy::kRandom, Strategy::kMinDegree,
                                              Strategy::kBetweenness};

// Graphs up to this size scan every node pair for Fiedler candidates; larger
// graphs restrict to the top_k extreme normalized coordinates on each side.
inline constexpr std::size_t kFullScanLimit = 2000;
inline constexpr std::size_t kBetweennessMaxNodes = 5000;
inline constexpr std::size_t kBetweennessTop = 32;

struct Candidate {
  NodeId i = 0;  // i < j
  NodeId j = 0;
  double score = 0.0;  // (v_i/sqrt(d_i) - v_j/sqrt(d_j))^2
};

// Non-adjacent pairs ranked by descending score, ties by (i, j). Empty for a
// complete graph.
std::vector<Candidate> fiedler_candidates(const Graph& g, const SpectralSummary& spec, std::size_t top_k = 64);

double fiedler_score(const Graph& g, const SpectralSummary& spec, NodeId i, NodeId j);

// (x_i - x_j)^2 > C_deg (x_i^2 + x_j^2) with x = v / sqrt(d). Diagnostic only.
bool condition_check(const Graph& g, const SpectralSummary& spec, NodeId i, NodeId j, double C_deg);

// Exact Brandes betweenness (unnormalized, each unordered pair counted once).
std::vector<double> betweenness_centrality(const Graph& g);

// Edge chosen by the strategy, returned as (min id, max id). spec is required
// for the Fiedler strategy. Throws InputError on a complete graph.
Edge select_edge(const Graph& g, Strategy strategy, std::uint64_t seed, const SpectralSummary* spec = nullptr,
                 std::size_t top_k = 64);

struct InterventionRecord {
  std::size_t step = 0;
  std::optional<Edge> edge;  // absent on the step-0 row
  Strategy strategy = Strategy::kFiedler;
  double lambda2_after = 0.0;
  double I_after = 0.0;
  std::optional<double> fiedler_score;
  std::optional<bool> condition_holds;
};

struct InterventionOptions {
  std::size_t steps = 20;
  SlaParams sla{2.0, 6.0};
  SolverOptions solver;
  std::uint64_t seed = 1;
  double C_deg = 0.5;
  std::size_t top_k = 64;
  // Stop early once the measured I is at or below this value.
  std::optional<double> stop_at_I;
};

// Step 0 records the initial state; every later step adds one edge at weight
// 1 and recomputes lambda2 and the exact I. Stops early once the graph is
// complete or stop_at_I is reached. The input graph is not modified.
std::vector<InterventionRecord> run_intervention(const Graph& g, Strategy strategy, const InterventionOptions& opts);

}  // namespace qoegap
