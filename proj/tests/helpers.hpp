#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "homophily/graph.hpp"

namespace testing {

inline homophily::Network parse(const std::string& text, homophily::EdgeListOptions o = {}) {
  std::istringstream in(text);
  return homophily::load_edge_list(in, o);
}

// Unlabelled network from an explicit edge list.
inline homophily::Network make(std::size_t n, std::vector<std::pair<int, int>> edges) {
  std::vector<homophily::Edge> es;
  for (auto [a, b] : edges) es.push_back({static_cast<homophily::NodeId>(a), static_cast<homophily::NodeId>(b)});
  return homophily::Network(n, std::move(es));
}

// Both directions of every pair.
inline homophily::Network make_symmetric(std::size_t n, std::vector<std::pair<int, int>> edges) {
  std::vector<std::pair<int, int>> both;
  for (auto [a, b] : edges) {
    both.emplace_back(a, b);
    both.emplace_back(b, a);
  }
  return make(n, both);
}

inline homophily::Network star(int leaves) {
  std::vector<std::pair<int, int>> e;
  for (int i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return make_symmetric(static_cast<std::size_t>(leaves) + 1, e);
}

inline homophily::Network complete(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return make_symmetric(static_cast<std::size_t>(n), e);
}

}  // namespace testing
