#pragma once

#include <cstddef>
#include <cstdint>
#include <list>
#include <unordered_map>
#include <vector>

#include "qoegap/graph.hpp"

namespace qoegap {

enum class HistogramMode { kExact, kSampled };

// Counts of unordered node pairs per hop distance. counts[h] is the number of
// pairs at distance h; counts[0] is always zero.
struct DistanceHistogram {
  std::vector<std::uint64_t> counts;
  // Sum of counts: M in exact mode, the sample count in sampled mode.
  std::uint64_t total = 0;
  // M = n(n-1)/2 of the graph the histogram describes.
  std::uint64_t pair_count = 0;
  HistogramMode mode = HistogramMode::kExact;
  std::uint64_t seed = 0;
  // Largest BFS eccentricity seen while resolving samples; a lower bound on
  // the diameter. Every class 1..eccentricity_floor is non-empty.
  Hop eccentricity_floor = 0;

  Hop max_distance() const noexcept { return counts.empty() ? 0 : static_cast<Hop>(counts.size() - 1); }
  std::uint64_t at(Hop h) const noexcept {
    return h >= 0 && static_cast<std::size_t>(h) < counts.size() ? counts[h] : 0;
  }
};

struct SamplingOptions {
  std::uint64_t samples = 200000;
  std::uint64_t seed = 1;
  // Memory budget for cached BFS rows.
  std::size_t cache_bytes = std::size_t{256} << 20;
};

// Exact all-pairs histogram via BFS from every source; each pair counted once.
// Throws InputError on a disconnected graph.
DistanceHistogram distance_histogram_exact(const Graph& g);

// m pairs drawn uniformly with replacement from the M unordered pairs.
DistanceHistogram distance_histogram_sampled(const Graph& g, const SamplingOptions& opts);

// LRU cache of per-source BFS rows bounded by a byte budget.
class BfsRowCache {
 public:
  BfsRowCache(const Graph& g, std::size_t budget_bytes);

  const std::vector<Hop>& row(NodeId source);
  Hop distance(NodeId u, NodeId v);

  std::size_t bfs_runs() const noexcept { return bfs_runs_; }
  Hop max_eccentricity() const noexcept { return max_ecc_; }

 private:
  using Entry = std::pair<NodeId, std::vector<Hop>>;
  const Graph& graph_;
  std::size_t capacity_rows_;
  std::list<Entry> lru_;
  std::unordered_map<NodeId, std::list<Entry>::iterator> index_;
  std::size_t bfs_runs_ = 0;
  Hop max_ecc_ = 0;
};

// tau[r] = fraction of unordered pairs at distance > r, r = 0..diameter.
struct TailProfile {
  std::vector<double> tau;
  // Integer numerators: tail_pairs[r] = #pairs with distance > r.
  std::vector<std::uint64_t> tail_pairs;
  std::uint64_t pair_count = 0;
  Hop r_star = 0;

  Hop r_max() const noexcept { return tau.empty() ? 0 : static_cast<Hop>(tau.size() - 1); }
  // tau beyond the diameter is zero; negative radii are one.
  double at(Hop r) const noexcept {
    if (r < 0) return 1.0;
    return static_cast<std::size_t>(r) < tau.size() ? tau[r] : 0.0;
  }
};

// Builds the profile from the histogram and independently from the pair-ball
// identity tau_r = (1/2M) sum_u |V \ B_r(u)|; throws std::logic_error if the
// two integer tallies disagree. Requires an exact histogram.
TailProfile tail_profile(const Graph& g, const DistanceHistogram& hist);

// max over u of the smallest t with vol(B_t(u)) > vol(V)/2.
Hop r_star_mixing_radius(const Graph& g);

// Largest BFS eccentricity; requires a connected graph.
Hop hop_diameter(const Graph& g);

}  // namespace qoegap
