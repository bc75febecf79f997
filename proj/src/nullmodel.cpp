#include "homophily/nullmodel.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "homophily/error.hpp"
#include "homophily/random.hpp"

namespace homophily {

namespace {

std::uint64_t key(NodeId s, NodeId d) { return (std::uint64_t{s} << 32) | d; }
std::uint64_t ukey(NodeId a, NodeId b) { return a < b ? key(a, b) : key(b, a); }

std::uint64_t attempt_count(double swaps_per_edge, std::size_t m) {
  if (!(swaps_per_edge >= 0.0)) throw InvalidArgument("swaps_per_edge must be non-negative");
  return static_cast<std::uint64_t>(std::ceil(swaps_per_edge * static_cast<double>(m)));
}

// Two distinct indices in [0, m).
std::pair<std::size_t, std::size_t> pick_pair(Rng& rng, std::size_t m) {
  const auto i = static_cast<std::size_t>(rng.below(m));
  auto j = static_cast<std::size_t>(rng.below(m - 1));
  if (j >= i) ++j;
  return {i, j};
}

}  // namespace

Randomized randomize_degree_preserving(const Network& network, double swaps_per_edge,
                                       std::uint64_t seed) {
  std::vector<Edge> edges(network.edges().begin(), network.edges().end());
  SwapTrace trace;
  trace.seed = seed;
  const auto m = edges.size();
  if (m < 2) return {network.with_edges(std::move(edges)), trace};
  const auto attempts = attempt_count(swaps_per_edge, m);
  std::unordered_set<std::uint64_t> present;
  present.reserve(m * 2);
  for (const auto& e : edges) present.insert(key(e.src, e.dst));
  Rng rng(seed);
  for (std::uint64_t t = 0; t < attempts; ++t) {
    ++trace.attempted;
    const auto [i, j] = pick_pair(rng, m);
    const NodeId a = edges[i].src, b = edges[i].dst;
    const NodeId c = edges[j].src, d = edges[j].dst;
    if (a == d || c == b) {
      ++trace.rejected_selfloop;
      continue;
    }
    if (present.count(key(a, d)) || present.count(key(c, b))) {
      ++trace.rejected_multiedge;
      continue;
    }
    present.erase(key(a, b));
    present.erase(key(c, d));
    present.insert(key(a, d));
    present.insert(key(c, b));
    edges[i].dst = d;
    edges[j].dst = b;
    ++trace.accepted;
  }
  return {network.with_edges(std::move(edges)), trace};
}

std::vector<Edge> undirected_edges(const Network& network) {
  std::vector<Edge> out;
  out.reserve(network.edge_count());
  for (const auto& e : network.edges()) {
    if (e.src == e.dst) continue;
    out.push_back({std::min(e.src, e.dst), std::max(e.src, e.dst)});
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Randomized randomize_undirected_degree_preserving(const Network& network, double swaps_per_edge,
                                                  std::uint64_t seed) {
  auto edges = undirected_edges(network);
  SwapTrace trace;
  trace.seed = seed;
  const auto m = edges.size();
  if (m < 2) return {network.with_edges(std::move(edges)), trace};
  const auto attempts = attempt_count(swaps_per_edge, m);
  std::unordered_set<std::uint64_t> present;
  present.reserve(m * 2);
  for (const auto& e : edges) present.insert(ukey(e.src, e.dst));
  Rng rng(seed);
  for (std::uint64_t t = 0; t < attempts; ++t) {
    ++trace.attempted;
    const auto [i, j] = pick_pair(rng, m);
    const NodeId a = edges[i].src, b = edges[i].dst;
    NodeId c = edges[j].src, d = edges[j].dst;
    if (rng.below(2)) std::swap(c, d);
    // {a,b},{c,d} -> {a,d},{c,b}
    if (a == d || c == b) {
      ++trace.rejected_selfloop;
      continue;
    }
    if (present.count(ukey(a, d)) || present.count(ukey(c, b))) {
      ++trace.rejected_multiedge;
      continue;
    }
    present.erase(ukey(a, b));
    present.erase(ukey(c, d));
    present.insert(ukey(a, d));
    present.insert(ukey(c, b));
    edges[i] = {std::min(a, d), std::max(a, d)};
    edges[j] = {std::min(c, b), std::max(c, b)};
    ++trace.accepted;
  }
  return {network.with_edges(std::move(edges)), trace};
}

double edge_jaccard(const Network& a, const Network& b) {
  std::unordered_set<std::uint64_t> sa, sb;
  for (const auto& e : a.edges()) sa.insert(key(e.src, e.dst));
  for (const auto& e : b.edges()) sb.insert(key(e.src, e.dst));
  std::size_t common = 0;
  for (auto k : sa) common += sb.count(k);
  const auto uni = sa.size() + sb.size() - common;
  return uni == 0 ? 1.0 : static_cast<double>(common) / static_cast<double>(uni);
}

}  // namespace homophily
