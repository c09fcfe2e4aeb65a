#include "qoegap/intervention.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "qoegap/distances.hpp"

namespace qoegap {

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::kFiedler:
      return "fiedler";
    case Strategy::kRandom:
      return "random";
    case Strategy::kMinDegree:
      return "min_degree";
    case Strategy::kBetweenness:
      return "betweenness";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view name) {
  for (Strategy s : kAllStrategies) {
    if (name == to_string(s)) return s;
  }
  throw InputError("unknown strategy '" + std::string(name) + "'");
}

namespace {

std::vector<double> normalized_coordinates(const Graph& g, const SpectralSummary& spec) {
  const std::size_t n = g.node_count();
  if (spec.fiedler.size() != n) throw InputError("Fiedler vector length does not match the graph");
  std::vector<double> x(n);
  for (NodeId v = 0; v < n; ++v) {
    const auto d = g.degree(v);
    if (d == 0) throw InputError("Fiedler coordinates: node " + std::to_string(v) + " is isolated");
    x[v] = spec.fiedler[v] / std::sqrt(static_cast<double>(d));
  }
  return x;
}

std::vector<NodeId> candidate_pool(const std::vector<double>& x, std::size_t top_k) {
  const std::size_t n = x.size();
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  if (n <= kFullScanLimit || 2 * top_k >= n) return order;
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return x[a] != x[b] ? x[a] < x[b] : a < b; });
  std::vector<NodeId> pool(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top_k));
  pool.insert(pool.end(), order.end() - static_cast<std::ptrdiff_t>(top_k), order.end());
  std::sort(pool.begin(), pool.end());
  return pool;
}

// Strict ranking: higher score first, then lexicographic (i, j).
bool ranks_before(const Candidate& a, const Candidate& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.i != b.i) return a.i < b.i;
  return a.j < b.j;
}

template <class Fn>
void for_each_candidate(const Graph& g, const std::vector<double>& x, std::size_t top_k, Fn fn) {
  const auto pool = candidate_pool(x, top_k);
  for (std::size_t a = 0; a < pool.size(); ++a) {
    for (std::size_t b = a + 1; b < pool.size(); ++b) {
      const NodeId i = pool[a];
      const NodeId j = pool[b];
      if (g.has_edge(i, j)) continue;
      const double diff = x[i] - x[j];
      fn(Candidate{i, j, diff * diff});
    }
  }
}

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void require_non_edge(const Graph& g) {
  if (g.edge_count() >= pair_count(g.node_count())) throw InputError("select_edge: graph is complete");
}

Edge select_random(const Graph& g, std::uint64_t seed) {
  const std::size_t n = g.node_count();
  const std::uint64_t free_pairs = pair_count(n) - g.edge_count();
  std::mt19937_64 rng(seed);
  if (4 * free_pairs >= pair_count(n)) {
    std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
    while (true) {
      const NodeId u = pick(rng);
      const NodeId v = pick(rng);
      if (u == v || g.has_edge(u, v)) continue;
      return {std::min(u, v), std::max(u, v)};
    }
  }
  // Dense graph: index the non-edges directly.
  std::uint64_t target = std::uniform_int_distribution<std::uint64_t>(0, free_pairs - 1)(rng);
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (g.has_edge(u, v)) continue;
      if (target-- == 0) return {u, v};
    }
  }
  throw std::logic_error("select_random: non-edge count mismatch");
}

Edge first_open_pair(const Graph& g, const std::vector<NodeId>& ranked) {
  for (std::size_t a = 0; a < ranked.size(); ++a) {
    for (std::size_t b = a + 1; b < ranked.size(); ++b) {
      if (!g.has_edge(ranked[a], ranked[b])) {
        return {std::min(ranked[a], ranked[b]), std::max(ranked[a], ranked[b])};
      }
    }
  }
  throw InputError("select_edge: no open pair among ranked nodes");
}

Edge select_min_degree(const Graph& g) {
  std::vector<NodeId> order(g.node_count());
  std::iota(order.begin(), order.end(), NodeId{0});
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return g.degree(a) < g.degree(b); });
  return first_open_pair(g, order);
}

Edge select_betweenness(const Graph& g) {
  const auto bc = betweenness_centrality(g);
  std::vector<NodeId> order(g.node_count());
  std::iota(order.begin(), order.end(), NodeId{0});
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return bc[a] > bc[b]; });
  std::vector<NodeId> top(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(std::min(order.size(), kBetweennessTop)));
  try {
    return first_open_pair(g, top);
  } catch (const InputError&) {
    // The top nodes form a clique; widen to the full ranking.
    return first_open_pair(g, order);
  }
}

}  // namespace

std::vector<Candidate> fiedler_candidates(const Graph& g, const SpectralSummary& spec, std::size_t top_k) {
  if (top_k == 0) throw InputError("fiedler_candidates: top_k must be positive");
  const auto x = normalized_coordinates(g, spec);
  std::vector<Candidate> out;
  for_each_candidate(g, x, top_k, [&](const Candidate& c) { out.push_back(c); });
  std::sort(out.begin(), out.end(), ranks_before);
  return out;
}

double fiedler_score(const Graph& g, const SpectralSummary& spec, NodeId i, NodeId j) {
  const auto x = normalized_coordinates(g, spec);
  if (i >= x.size() || j >= x.size()) throw InputError("fiedler_score: node id out of range");
  return (x[i] - x[j]) * (x[i] - x[j]);
}

bool condition_check(const Graph& g, const SpectralSummary& spec, NodeId i, NodeId j, double C_deg) {
  const auto x = normalized_coordinates(g, spec);
  if (i >= x.size() || j >= x.size()) throw InputError("condition_check: node id out of range");
  const double lhs = (x[i] - x[j]) * (x[i] - x[j]);
  return lhs > C_deg * (x[i] * x[i] + x[j] * x[j]);
}

std::vector<double> betweenness_centrality(const Graph& g) {
  const std::size_t n = g.node_count();
  if (n > kBetweennessMaxNodes) {
    throw InputError("betweenness_centrality: n=" + std::to_string(n) + " exceeds " +
                     std::to_string(kBetweennessMaxNodes));
  }
  std::vector<double> bc(n, 0.0);
  std::vector<NodeId> stack;
  std::vector<std::vector<NodeId>> preds(n);
  std::vector<double> sigma(n);
  std::vector<double> delta(n);
  std::vector<Hop> dist(n);
  std::vector<NodeId> queue;
  for (NodeId s = 0; s < n; ++s) {
    stack.clear();
    for (auto& p : preds) p.clear();
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    std::fill(dist.begin(), dist.end(), kUnreached);
    sigma[s] = 1.0;
    dist[s] = 0;
    queue.assign(1, s);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const NodeId v = queue[head];
      stack.push_back(v);
      for (NodeId w : g.neighbors(v)) {
        if (dist[w] == kUnreached) {
          dist[w] = dist[v] + 1;
          queue.push_back(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          preds[w].push_back(v);
        }
      }
    }
    while (!stack.empty()) {
      const NodeId w = stack.back();
      stack.pop_back();
      for (NodeId v : preds[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != s) bc[w] += delta[w];
    }
  }
  // Each unordered pair was visited from both endpoints.
  for (auto& b : bc) b *= 0.5;
  return bc;
}

Edge select_edge(const Graph& g, Strategy strategy, std::uint64_t seed, const SpectralSummary* spec,
                 std::size_t top_k) {
  require_non_edge(g);
  switch (strategy) {
    case Strategy::kFiedler: {
      if (spec == nullptr) throw InputError("select_edge: the Fiedler strategy needs a spectral summary");
      const auto x = normalized_coordinates(g, *spec);
      std::optional<Candidate> best;
      for_each_candidate(g, x, top_k, [&](const Candidate& c) {
        if (!best || ranks_before(c, *best)) best = c;
      });
      if (!best) throw InputError("select_edge: no Fiedler candidate in the pruned pool");
      return {best->i, best->j};
    }
    case Strategy::kRandom:
      return select_random(g, seed);
    case Strategy::kMinDegree:
      return select_min_degree(g);
    case Strategy::kBetweenness:
      return select_betweenness(g);
  }
  throw InputError("select_edge: unknown strategy");
}

std::vector<InterventionRecord> run_intervention(const Graph& g, Strategy strategy, const InterventionOptions& opts) {
  opts.sla.validate();
  if (!is_connected(g)) throw InputError("run_intervention: graph must be connected");

  auto measure_I = [&](const Graph& h) { return imbalance_index(distance_histogram_exact(h), opts.sla).I; };

  std::vector<InterventionRecord> out;
  Graph current = g;
  SpectralSummary spec = spectral_gap(current, opts.solver);
  InterventionRecord initial;
  initial.strategy = strategy;
  initial.lambda2_after = spec.lambda2;
  initial.I_after = measure_I(current);
  out.push_back(initial);
  auto reached = [&] { return opts.stop_at_I && out.back().I_after <= *opts.stop_at_I; };

  for (std::size_t step = 1; step <= opts.steps; ++step) {
    if (reached() || current.edge_count() >= pair_count(current.node_count())) break;
    const Edge e = select_edge(current, strategy, splitmix64(opts.seed + step), &spec, opts.top_k);
    InterventionRecord rec;
    rec.step = step;
    rec.edge = e;
    rec.strategy = strategy;
    rec.fiedler_score = fiedler_score(current, spec, e.first, e.second);
    rec.condition_holds = condition_check(current, spec, e.first, e.second, opts.C_deg);
    current = current.with_edge(e.first, e.second);
    spec = spectral_gap(current, opts.solver);
    rec.lambda2_after = spec.lambda2;
    rec.I_after = measure_I(current);
    out.push_back(rec);
  }
  return out;
}

}  // namespace qoegap
