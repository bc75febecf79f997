#pragma once

#include <cstdint>
#include <vector>

#include "homophily/graph.hpp"
#include "homophily/matrix.hpp"

// Seeded random structures with known properties, for benchmarks and the
// bundled demo dataset.
namespace homophily::synthetic {

/// G(n, p) on ordered pairs, no self-loops.
Network erdos_renyi_directed(std::size_t n, double p, std::uint64_t seed);

/// G(n, p) on unordered pairs with both directions materialised.
Network erdos_renyi_symmetric(std::size_t n, double p, std::uint64_t seed);

struct PlantedRichClub {
  Network network;
  std::vector<NodeId> hubs;
  /// No background node has undirected degree above this.
  std::uint32_t background_cap = 0;
};

// Sparse background G(n, p) whose nodes are capped at `background_cap`
// neighbours (edges that would exceed the cap are skipped), plus `hubs`
// fully connected hub nodes that each link to `hub_links` random background
// nodes. Symmetric: both directions materialised.
PlantedRichClub planted_rich_club(std::size_t background_nodes, std::size_t hubs, double background_p,
                                  std::uint32_t background_cap, std::size_t hub_links, std::uint64_t seed);

struct ClusteredData {
  Matrix points;
  std::vector<std::uint32_t> cluster;
};

/// `clusters` isotropic Gaussian blobs in `dim` dimensions; centres drawn
/// N(0, separation^2) per coordinate, points N(centre, sd^2). Rows are
/// interleaved (row i belongs to cluster i % clusters).
ClusteredData gaussian_clusters(std::size_t rows, std::size_t clusters, std::size_t dim, double separation,
                                double sd, std::uint64_t seed);

/// Directed edges drawn independently with p(u->v) = min(1, c * exp(-|x_u - x_v| / length_scale)),
/// c chosen so the expected out-degree is about `mean_out_degree`.
Network planted_homophily(const Matrix& features, double mean_out_degree, double length_scale,
                          std::uint64_t seed);

}  // namespace homophily::synthetic
