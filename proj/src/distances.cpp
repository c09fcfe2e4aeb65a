#include "qoegap/distances.hpp"

#include <algorithm>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>

#include "parallel.hpp"

namespace qoegap {
namespace {

// Reusable BFS that reports per-layer node counts and volumes.
class LayerBfs {
 public:
  explicit LayerBfs(const Graph& g) : g_(g), dist_(g.node_count(), kUnreached) { queue_.reserve(g.node_count()); }

  // Returns the number of nodes reached. layer_size[t] and layer_volume[t]
  // describe the nodes at distance exactly t.
  std::size_t run(NodeId source) {
    for (NodeId v : queue_) dist_[v] = kUnreached;
    queue_.clear();
    layer_size.clear();
    layer_volume.clear();
    dist_[source] = 0;
    queue_.push_back(source);
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      const NodeId u = queue_[head];
      const Hop du = dist_[u];
      if (static_cast<std::size_t>(du) >= layer_size.size()) {
        layer_size.push_back(0);
        layer_volume.push_back(0);
      }
      ++layer_size[du];
      layer_volume[du] += g_.degree(u);
      for (NodeId v : g_.neighbors(u)) {
        if (dist_[v] == kUnreached) {
          dist_[v] = du + 1;
          queue_.push_back(v);
        }
      }
    }
    return queue_.size();
  }

  Hop dist(NodeId v) const { return dist_[v]; }

  std::vector<std::uint64_t> layer_size;
  std::vector<std::uint64_t> layer_volume;

 private:
  const Graph& g_;
  std::vector<Hop> dist_;
  std::vector<NodeId> queue_;
};

void require_connected_size(const Graph& g, std::size_t reached, const char* who) {
  if (reached != g.node_count()) {
    throw InputError(std::string(who) + ": graph is disconnected (take the largest connected component first)");
  }
}

void add_into(std::vector<std::uint64_t>& dst, const std::vector<std::uint64_t>& src) {
  if (dst.size() < src.size()) dst.resize(src.size(), 0);
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] += src[i];
}

void trim_trailing_zeros(std::vector<std::uint64_t>& v) {
  while (v.size() > 1 && v.back() == 0) v.pop_back();
}

// Smallest t with 2 vol(B_t) > vol(V), from per-layer volumes.
Hop half_volume_radius(const std::vector<std::uint64_t>& layer_volume, std::uint64_t total_volume) {
  std::uint64_t ball = 0;
  for (std::size_t t = 0; t < layer_volume.size(); ++t) {
    ball += layer_volume[t];
    if (2 * ball > total_volume) return static_cast<Hop>(t);
  }
  return static_cast<Hop>(layer_volume.size());
}

struct MaxAcc {
  Hop value = 0;
  std::optional<LayerBfs> bfs;
};

Hop max_of(const std::vector<MaxAcc>& accs) {
  Hop best = 0;
  for (const auto& a : accs) best = std::max(best, a.value);
  return best;
}

}  // namespace

DistanceHistogram distance_histogram_exact(const Graph& g) {
  const std::size_t n = g.node_count();
  if (n < 2) throw InputError("distance_histogram: need at least 2 nodes");

  struct Acc {
    std::vector<std::uint64_t> counts;
    Hop ecc = 0;
    std::optional<LayerBfs> bfs;
  };
  auto accs = detail::parallel_accumulate(n, Acc{}, [&](Acc& acc, std::size_t s) {
    if (!acc.bfs) acc.bfs.emplace(g);
    auto& bfs = *acc.bfs;
    require_connected_size(g, bfs.run(static_cast<NodeId>(s)), "distance_histogram");
    acc.ecc = std::max<Hop>(acc.ecc, static_cast<Hop>(bfs.layer_size.size() - 1));
    for (NodeId t = static_cast<NodeId>(s) + 1; t < n; ++t) {
      const Hop d = bfs.dist(t);
      if (acc.counts.size() <= static_cast<std::size_t>(d)) acc.counts.resize(d + 1, 0);
      ++acc.counts[d];
    }
  });

  DistanceHistogram hist;
  hist.mode = HistogramMode::kExact;
  hist.pair_count = pair_count(n);
  for (const auto& acc : accs) {
    add_into(hist.counts, acc.counts);
    hist.eccentricity_floor = std::max(hist.eccentricity_floor, acc.ecc);
  }
  if (hist.counts.empty()) hist.counts.assign(1, 0);
  trim_trailing_zeros(hist.counts);
  for (auto c : hist.counts) hist.total += c;
  return hist;
}

BfsRowCache::BfsRowCache(const Graph& g, std::size_t budget_bytes)
    : graph_(g),
      capacity_rows_(std::max<std::size_t>(1, budget_bytes / std::max<std::size_t>(1, g.node_count() * sizeof(Hop)))) {}

const std::vector<Hop>& BfsRowCache::row(NodeId source) {
  if (auto it = index_.find(source); it != index_.end()) {
    lru_.splice(lru_.begin(), lru_, it->second);
    return it->second->second;
  }
  if (lru_.size() >= capacity_rows_) {
    index_.erase(lru_.back().first);
    lru_.pop_back();
  }
  auto dist = bfs_distances(graph_, source);
  ++bfs_runs_;
  for (Hop d : dist) {
    if (d == kUnreached) {
      throw InputError("distance sampling: graph is disconnected (take the largest connected component first)");
    }
    max_ecc_ = std::max(max_ecc_, d);
  }
  lru_.emplace_front(source, std::move(dist));
  index_[source] = lru_.begin();
  return lru_.front().second;
}

Hop BfsRowCache::distance(NodeId u, NodeId v) {
  if (index_.count(v) && !index_.count(u)) return row(v)[u];
  return row(u)[v];
}

DistanceHistogram distance_histogram_sampled(const Graph& g, const SamplingOptions& opts) {
  const std::size_t n = g.node_count();
  if (n < 2) throw InputError("distance_histogram: need at least 2 nodes");
  if (opts.samples == 0) throw InputError("distance_histogram: sample count must be positive");

  std::mt19937_64 rng(opts.seed);
  std::uniform_int_distribution<std::uint64_t> first(0, n - 1);
  std::uniform_int_distribution<std::uint64_t> second(0, n - 2);
  BfsRowCache cache(g, opts.cache_bytes);

  DistanceHistogram hist;
  hist.mode = HistogramMode::kSampled;
  hist.seed = opts.seed;
  hist.pair_count = pair_count(n);
  hist.counts.assign(1, 0);
  for (std::uint64_t i = 0; i < opts.samples; ++i) {
    // Uniform ordered pair of distinct nodes, hence uniform unordered pair.
    auto u = static_cast<NodeId>(first(rng));
    auto v = static_cast<NodeId>(second(rng));
    if (v >= u) ++v;
    const Hop d = cache.distance(std::min(u, v), std::max(u, v));
    if (hist.counts.size() <= static_cast<std::size_t>(d)) hist.counts.resize(d + 1, 0);
    ++hist.counts[d];
  }
  hist.total = opts.samples;
  hist.eccentricity_floor = cache.max_eccentricity();
  return hist;
}

TailProfile tail_profile(const Graph& g, const DistanceHistogram& hist) {
  if (hist.mode != HistogramMode::kExact) throw InputError("tail_profile: requires an exact histogram");
  const std::size_t n = g.node_count();
  if (hist.pair_count != pair_count(n)) throw InputError("tail_profile: histogram does not match graph");

  const std::uint64_t total_volume = g.volume();
  struct Acc {
    std::vector<std::uint64_t> outside;  // outside[r] = sum_u |V \ B_r(u)|
    Hop r_star = 0;
    std::optional<LayerBfs> bfs;
  };
  auto accs = detail::parallel_accumulate(n, Acc{}, [&](Acc& acc, std::size_t s) {
    if (!acc.bfs) acc.bfs.emplace(g);
    auto& bfs = *acc.bfs;
    require_connected_size(g, bfs.run(static_cast<NodeId>(s)), "tail_profile");
    acc.r_star = std::max(acc.r_star, half_volume_radius(bfs.layer_volume, total_volume));
    if (acc.outside.size() < bfs.layer_size.size()) acc.outside.resize(bfs.layer_size.size(), 0);
    std::uint64_t inside = 0;
    for (std::size_t r = 0; r < bfs.layer_size.size(); ++r) {
      inside += bfs.layer_size[r];
      acc.outside[r] += n - inside;
    }
  });
  std::vector<std::uint64_t> outside;
  Hop r_star = 0;
  for (const auto& acc : accs) {
    add_into(outside, acc.outside);
    r_star = std::max(r_star, acc.r_star);
  }

  // Histogram route: tail_pairs[r] = sum_{h>r} counts[h].
  const std::size_t radii = std::max<std::size_t>(hist.counts.size(), 1);
  std::vector<std::uint64_t> tail(radii, 0);
  for (std::size_t r = radii; r-- > 0;) {
    tail[r] = (r + 1 < radii ? tail[r + 1] + hist.counts[r + 1] : 0);
  }
  if (outside.size() != radii) throw std::logic_error("tail_profile: diameter mismatch between routes");
  for (std::size_t r = 0; r < radii; ++r) {
    if (outside[r] != 2 * tail[r]) {
      throw std::logic_error("tail_profile: pair-ball identity violated at r=" + std::to_string(r));
    }
  }

  TailProfile p;
  p.pair_count = hist.pair_count;
  p.tail_pairs = tail;
  p.tau.resize(radii);
  for (std::size_t r = 0; r < radii; ++r) {
    p.tau[r] = static_cast<double>(tail[r]) / static_cast<double>(hist.pair_count);
  }
  p.r_star = r_star;
  return p;
}

Hop r_star_mixing_radius(const Graph& g) {
  const std::size_t n = g.node_count();
  if (n == 0) throw InputError("r_star: empty graph");
  const std::uint64_t total_volume = g.volume();
  auto accs = detail::parallel_accumulate(n, MaxAcc{}, [&](MaxAcc& acc, std::size_t s) {
    if (!acc.bfs) acc.bfs.emplace(g);
    require_connected_size(g, acc.bfs->run(static_cast<NodeId>(s)), "r_star");
    acc.value = std::max(acc.value, half_volume_radius(acc.bfs->layer_volume, total_volume));
  });
  return max_of(accs);
}

Hop hop_diameter(const Graph& g) {
  const std::size_t n = g.node_count();
  if (n == 0) throw InputError("hop_diameter: empty graph");
  auto accs = detail::parallel_accumulate(n, MaxAcc{}, [&](MaxAcc& acc, std::size_t s) {
    if (!acc.bfs) acc.bfs.emplace(g);
    require_connected_size(g, acc.bfs->run(static_cast<NodeId>(s)), "hop_diameter");
    acc.value = std::max<Hop>(acc.value, static_cast<Hop>(acc.bfs->layer_size.size() - 1));
  });
  return max_of(accs);
}

}  // namespace qoegap
