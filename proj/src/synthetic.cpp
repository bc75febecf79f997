#include "homophily/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "homophily/error.hpp"
#include "homophily/random.hpp"

namespace homophily::synthetic {

namespace {

double distance(const Matrix& x, std::size_t a, std::size_t b) {
  double s = 0.0;
  for (std::size_t c = 0; c < x.cols(); ++c) {
    const double d = x(a, c) - x(b, c);
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace

Network erdos_renyi_directed(std::size_t n, double p, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = 0; v < n; ++v) {
      if (u != v && rng.bernoulli(p)) edges.push_back({u, v});
    }
  }
  return Network(n, std::move(edges));
}

Network erdos_renyi_symmetric(std::size_t n, double p, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (rng.bernoulli(p)) {
        edges.push_back({u, v});
        edges.push_back({v, u});
      }
    }
  }
  return Network(n, std::move(edges));
}

PlantedRichClub planted_rich_club(std::size_t background_nodes, std::size_t hubs, double background_p,
                                  std::uint32_t background_cap, std::size_t hub_links, std::uint64_t seed) {
  if (hub_links > background_nodes) throw InvalidArgument("more hub links than background nodes");
  Rng rng(seed);
  const auto n = background_nodes + hubs;
  std::vector<std::uint32_t> degree(n, 0);
  std::vector<Edge> edges;
  auto link = [&](NodeId a, NodeId b) {
    edges.push_back({a, b});
    edges.push_back({b, a});
    ++degree[a];
    ++degree[b];
  };
  for (NodeId u = 0; u < background_nodes; ++u) {
    for (NodeId v = u + 1; v < background_nodes; ++v) {
      if (rng.bernoulli(background_p) && degree[u] < background_cap && degree[v] < background_cap) link(u, v);
    }
  }
  PlantedRichClub out;
  out.background_cap = background_cap;
  for (std::size_t h = 0; h < hubs; ++h) out.hubs.push_back(static_cast<NodeId>(background_nodes + h));
  for (std::size_t a = 0; a < hubs; ++a) {
    for (std::size_t b = a + 1; b < hubs; ++b) link(out.hubs[a], out.hubs[b]);
  }
  std::vector<NodeId> pool(background_nodes);
  for (NodeId i = 0; i < background_nodes; ++i) pool[i] = i;
  for (auto hub : out.hubs) {
    rng.shuffle(std::span<NodeId>(pool));
    for (std::size_t i = 0; i < hub_links; ++i) {
      // Hub links may lift background nodes above the cap only through hubs.
      link(hub, pool[i]);
    }
  }
  out.network = Network(n, std::move(edges));
  return out;
}

ClusteredData gaussian_clusters(std::size_t rows, std::size_t clusters, std::size_t dim, double separation,
                                double sd, std::uint64_t seed) {
  Rng rng(seed);
  Matrix centres(clusters, dim);
  for (auto& v : centres.data()) v = separation * rng.normal();
  ClusteredData out{Matrix(rows, dim), std::vector<std::uint32_t>(rows)};
  for (std::size_t r = 0; r < rows; ++r) {
    const auto c = r % clusters;
    out.cluster[r] = static_cast<std::uint32_t>(c);
    for (std::size_t d = 0; d < dim; ++d) out.points(r, d) = centres(c, d) + sd * rng.normal();
  }
  return out;
}

Network planted_homophily(const Matrix& features, double mean_out_degree, double length_scale,
                          std::uint64_t seed) {
  const auto n = features.rows();
  if (n < 2) throw InvalidArgument("planted homophily needs at least 2 nodes");
  double total = 0.0;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (u != v) total += std::exp(-distance(features, u, v) / length_scale);
    }
  }
  const double c = mean_out_degree * static_cast<double>(n) / total;
  Rng rng(seed);
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = 0; v < n; ++v) {
      if (u == v) continue;
      const double p = std::min(1.0, c * std::exp(-distance(features, u, v) / length_scale));
      if (rng.bernoulli(p)) edges.push_back({u, v});
    }
  }
  return Network(n, std::move(edges));
}

}  // namespace homophily::synthetic
