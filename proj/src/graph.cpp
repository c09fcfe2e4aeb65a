#include "qoegap/graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <string>

namespace qoegap {

struct GraphBuilder {
  // adjacency must already be sorted, unique, symmetric and loop-free.
  static Graph from_adjacency(const std::vector<std::vector<NodeId>>& adj) {
    Graph g;
    g.offsets_.resize(adj.size() + 1, 0);
    for (std::size_t v = 0; v < adj.size(); ++v) g.offsets_[v + 1] = g.offsets_[v] + adj[v].size();
    g.targets_.reserve(g.offsets_.back());
    for (const auto& nbrs : adj) g.targets_.insert(g.targets_.end(), nbrs.begin(), nbrs.end());
    return g;
  }
};

bool Graph::has_edge(NodeId u, NodeId v) const {
  if (u >= node_count() || v >= node_count()) return false;
  // Search the shorter list.
  if (degree(u) > degree(v)) std::swap(u, v);
  auto nbrs = neighbors(u);
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (NodeId u = 0; u < node_count(); ++u) {
    for (NodeId v : neighbors(u)) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

Graph Graph::with_edge(NodeId u, NodeId v) const {
  const std::size_t n = node_count();
  if (u >= n || v >= n) throw InputError("with_edge: node id out of range");
  if (u == v) throw InputError("with_edge: self-loop");
  if (has_edge(u, v)) throw InputError("with_edge: edge already present");

  Graph g;
  g.offsets_.resize(n + 1);
  g.targets_.reserve(targets_.size() + 2);
  g.offsets_[0] = 0;
  for (NodeId x = 0; x < n; ++x) {
    auto nbrs = neighbors(x);
    const NodeId extra = x == u ? v : (x == v ? u : kNoNode);
    if (extra == kNoNode) {
      g.targets_.insert(g.targets_.end(), nbrs.begin(), nbrs.end());
    } else {
      auto pos = std::lower_bound(nbrs.begin(), nbrs.end(), extra);
      g.targets_.insert(g.targets_.end(), nbrs.begin(), pos);
      g.targets_.push_back(extra);
      g.targets_.insert(g.targets_.end(), pos, nbrs.end());
    }
    g.offsets_[x + 1] = g.targets_.size();
  }
  return g;
}

BuildResult build_graph(std::size_t n, std::span<const Edge> edges) {
  BuildResult result;
  std::vector<std::vector<NodeId>> adj(n);
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n) {
      throw InputError("build_graph: edge (" + std::to_string(u) + "," + std::to_string(v) +
                       ") references a node >= n=" + std::to_string(n));
    }
    if (u == v) {
      ++result.dropped_self_loops;
      continue;
    }
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::size_t kept_directed = 0;
  for (auto& nbrs : adj) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    kept_directed += nbrs.size();
  }
  result.dropped_duplicates = edges.size() - result.dropped_self_loops - kept_directed / 2;
  result.graph = GraphBuilder::from_adjacency(adj);
  return result;
}

std::vector<Hop> bfs_distances(const Graph& g, NodeId source) {
  const std::size_t n = g.node_count();
  if (source >= n) throw InputError("bfs_distances: source out of range");
  std::vector<Hop> dist(n, kUnreached);
  std::vector<NodeId> queue;
  queue.reserve(n);
  dist[source] = 0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId u = queue[head];
    const Hop next = dist[u] + 1;
    for (NodeId v : g.neighbors(u)) {
      if (dist[v] == kUnreached) {
        dist[v] = next;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

bool is_connected(const Graph& g) {
  if (g.node_count() == 0) return false;
  auto dist = bfs_distances(g, 0);
  return std::none_of(dist.begin(), dist.end(), [](Hop d) { return d == kUnreached; });
}

ComponentResult largest_connected_component(const Graph& g) {
  const std::size_t n = g.node_count();
  if (n == 0) throw InputError("largest_connected_component: empty graph");

  std::vector<NodeId> label(n, kNoNode);
  NodeId best_label = 0;
  std::size_t best_size = 0;
  NodeId next_label = 0;
  std::vector<NodeId> stack;
  // Components are discovered in order of their smallest id, so keeping the
  // first maximum implements the tie rule.
  for (NodeId s = 0; s < n; ++s) {
    if (label[s] != kNoNode) continue;
    std::size_t size = 0;
    label[s] = next_label;
    stack.push_back(s);
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      ++size;
      for (NodeId v : g.neighbors(u)) {
        if (label[v] == kNoNode) {
          label[v] = next_label;
          stack.push_back(v);
        }
      }
    }
    if (size > best_size) {
      best_size = size;
      best_label = next_label;
    }
    ++next_label;
  }

  ComponentResult out;
  out.old_to_new.assign(n, kNoNode);
  out.new_to_old.reserve(best_size);
  for (NodeId v = 0; v < n; ++v) {
    if (label[v] == best_label) {
      out.old_to_new[v] = static_cast<NodeId>(out.new_to_old.size());
      out.new_to_old.push_back(v);
    }
  }
  std::vector<std::vector<NodeId>> adj(best_size);
  for (NodeId nv = 0; nv < best_size; ++nv) {
    for (NodeId w : g.neighbors(out.new_to_old[nv])) adj[nv].push_back(out.old_to_new[w]);
  }
  out.graph = GraphBuilder::from_adjacency(adj);
  return out;
}

DegreeStats degree_stats(const Graph& g) {
  DegreeStats s;
  if (g.node_count() == 0) return s;
  s.max_degree = 0;
  s.min_degree = g.degree(0);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    s.max_degree = std::max(s.max_degree, g.degree(v));
    s.min_degree = std::min(s.min_degree, g.degree(v));
  }
  if (s.min_degree == 0) {
    s.beta = {s.max_degree == 0 ? 0u : 1u, 0};
    return s;
  }
  const std::uint64_t d = std::gcd(s.max_degree, s.min_degree);
  s.beta = {s.max_degree / d, s.min_degree / d};
  return s;
}

}  // namespace qoegap
