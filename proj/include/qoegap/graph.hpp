#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qoegap {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

// Hop distance. Unreachable targets carry kUnreached, which every exact
// analysis rejects.
using Hop = std::int32_t;
inline constexpr Hop kUnreached = -1;

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

// Malformed or out-of-contract input (bad ids, disconnected graph where a
// connected one is required, invalid parameters).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Simple undirected graph stored as sorted adjacency in CSR form. Immutable
// once built; with_edge() returns a modified copy.
class Graph {
 public:
  Graph() = default;

  std::size_t node_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return targets_.size() / 2; }

  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }

  bool has_edge(NodeId u, NodeId v) const;

  // Edges as (min id, max id), sorted lexicographically.
  std::vector<Edge> edges() const;

  // Copy with (u, v) added. Throws InputError if the edge exists or u == v.
  Graph with_edge(NodeId u, NodeId v) const;

  // Total degree, vol(V) = 2m.
  std::uint64_t volume() const noexcept { return targets_.size(); }

  bool operator==(const Graph&) const = default;

 private:
  friend struct GraphBuilder;
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> targets_;
};

struct BuildResult {
  Graph graph;
  std::size_t dropped_self_loops = 0;
  std::size_t dropped_duplicates = 0;

  std::size_t dropped() const noexcept { return dropped_self_loops + dropped_duplicates; }
};

// Deduplicates, drops self-loops and symmetrizes. Throws InputError if an id
// is >= n.
BuildResult build_graph(std::size_t n, std::span<const Edge> edges);

struct ComponentResult {
  Graph graph;
  // old id -> new id, kNoNode for nodes outside the component.
  std::vector<NodeId> old_to_new;
  // new id -> old id.
  std::vector<NodeId> new_to_old;
};

// Largest connected component, relabeled 0..n'-1 preserving id order. Ties
// between equal-size components go to the one holding the smallest id.
ComponentResult largest_connected_component(const Graph& g);

bool is_connected(const Graph& g);

// BFS hop distances from source; unreached nodes hold kUnreached.
std::vector<Hop> bfs_distances(const Graph& g, NodeId source);

// Exact rational p/q.
struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;
  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Ratio&) const = default;
};

struct DegreeStats {
  std::size_t max_degree = 0;
  std::size_t min_degree = 0;
  Ratio beta;  // max/min, reduced
};

DegreeStats degree_stats(const Graph& g);

// n(n-1)/2
inline std::uint64_t pair_count(std::size_t n) {
  return static_cast<std::uint64_t>(n) * (n == 0 ? 0 : n - 1) / 2;
}

}  // namespace qoegap
