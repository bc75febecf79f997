#pragma once

#include <cstdint>
#include <vector>

#include "homophily/graph.hpp"

namespace homophily {

struct SwapTrace {
  std::uint64_t attempted = 0;
  std::uint64_t accepted = 0;
  std::uint64_t rejected_selfloop = 0;
  std::uint64_t rejected_multiedge = 0;
  std::uint64_t seed = 0;
};

struct Randomized {
  Network network;
  SwapTrace trace;
};

// Markov-chain double edge swaps on a directed network. Each of the
// ceil(swaps_per_edge * |E|) attempts picks two distinct edges a->b, c->d
// uniformly and proposes a->d, c->b; the proposal is rejected if it creates
// a self-loop or an edge that already exists. In- and out-degree of every
// node are preserved exactly. Networks with fewer than 2 edges are returned
// unchanged.
Randomized randomize_degree_preserving(const Network& network, double swaps_per_edge,
                                       std::uint64_t seed);

/// Undirected simple graph of `network` as pairs (min, max), sorted.
std::vector<Edge> undirected_edges(const Network& network);

// Same chain on the undirected simple graph of `network`: swaps {a,b},{c,d}
// into {a,d},{c,b} or {a,c},{b,d} (chosen uniformly). Preserves every
// node's undirected degree. The result holds one edge (min, max) per
// undirected link.
Randomized randomize_undirected_degree_preserving(const Network& network, double swaps_per_edge,
                                                  std::uint64_t seed);

/// |A n B| / |A u B| over directed edge sets (duplicates ignored).
double edge_jaccard(const Network& a, const Network& b);

}  // namespace homophily
