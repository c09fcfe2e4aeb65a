#include "qoegap/cheeger.hpp"

#include <cstdint>
#include <numeric>
#include <string>

namespace qoegap {

Ratio cheeger_bruteforce(const Graph& g) {
  const std::size_t n = g.node_count();
  if (n > kCheegerMaxNodes) {
    throw InputError("cheeger_bruteforce: n=" + std::to_string(n) + " exceeds the enumeration limit of " +
                     std::to_string(kCheegerMaxNodes));
  }
  if (n < 2 || !is_connected(g)) throw InputError("cheeger_bruteforce: requires a connected graph with n >= 2");

  const auto edges = g.edges();
  const std::uint64_t total = g.volume();
  bool found = false;
  Ratio best{0, 1};
  for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
    std::uint64_t vol = 0;
    for (NodeId v = 0; v < n; ++v) {
      if (mask >> v & 1u) vol += g.degree(v);
    }
    if (vol == 0 || 2 * vol > total) continue;
    std::uint64_t cut = 0;
    for (const auto& [u, v] : edges) cut += ((mask >> u) ^ (mask >> v)) & 1u;
    // cut/vol < best.num/best.den
    if (!found || cut * best.den < best.num * vol) {
      best = {cut, vol};
      found = true;
    }
  }
  const std::uint64_t d = std::gcd(best.num, best.den);
  return {best.num / d, best.den / d};
}

}  // namespace qoegap
