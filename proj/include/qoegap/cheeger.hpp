#pragma once

#include "qoegap/graph.hpp"

namespace qoegap {

inline constexpr std::size_t kCheegerMaxNodes = 14;

// Volume-based Cheeger constant by exhaustive subset enumeration:
// min over S with 0 < vol(S) <= vol(V)/2 of |boundary(S)| / vol(S).
// Test oracle only; refuses graphs above kCheegerMaxNodes nodes.
Ratio cheeger_bruteforce(const Graph& g);

}  // namespace qoegap
