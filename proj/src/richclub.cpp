#include "homophily/richclub.hpp"

#include <algorithm>
#include <cmath>

#include "homophily/error.hpp"
#include "homophily/parallel.hpp"
#include "homophily/random.hpp"

namespace homophily {

namespace {

constexpr std::uint64_t kRichClubStream = 0x52434c42;  // "RCLB"

double percentile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

// Per-node degrees and the edge list the club counts run over.
struct ClubInput {
  std::vector<std::uint32_t> degree;
  std::vector<Edge> edges;
};

ClubInput club_input(const Network& network, DegreeMode mode, bool directed) {
  ClubInput in;
  if (directed) {
    in.degree = select(degrees(network), mode);
    in.edges.assign(network.edges().begin(), network.edges().end());
  } else {
    in.edges = undirected_edges(network);
    in.degree.assign(network.node_count(), 0);
    for (const auto& e : in.edges) {
      ++in.degree[e.src];
      ++in.degree[e.dst];
    }
  }
  return in;
}

RichClubCurve curve_from(const ClubInput& in, DegreeMode mode, bool directed) {
  RichClubCurve curve{directed ? mode : DegreeMode::total, directed, {}};
  std::uint32_t max_degree = 0;
  for (auto d : in.degree) max_degree = std::max(max_degree, d);
  // An edge lies inside club k iff the smaller endpoint degree is >= k.
  std::vector<std::size_t> nodes_at(max_degree + 2, 0), edges_at(max_degree + 2, 0);
  for (auto d : in.degree) ++nodes_at[d];
  for (const auto& e : in.edges) {
    if (e.src == e.dst) continue;
    ++edges_at[std::min(in.degree[e.src], in.degree[e.dst])];
  }
  std::size_t club_nodes = 0, club_edges = 0;
  std::vector<RichClubPoint> reversed;
  for (std::uint32_t k = max_degree; k >= 1; --k) {
    club_nodes += nodes_at[k];
    club_edges += edges_at[k];
    RichClubPoint p{k, std::nullopt, club_nodes, club_edges};
    if (club_nodes >= 2) {
      const double m = static_cast<double>(club_nodes);
      const double possible = directed ? m * (m - 1.0) : m * (m - 1.0) / 2.0;
      p.phi = static_cast<double>(club_edges) / possible;
    }
    reversed.push_back(p);
  }
  curve.points.assign(reversed.rbegin(), reversed.rend());
  return curve;
}

Randomized randomize(const Network& network, bool directed, double swaps, std::uint64_t seed) {
  return directed ? randomize_degree_preserving(network, swaps, seed)
                  : randomize_undirected_degree_preserving(network, swaps, seed);
}

}  // namespace

RichClubCurve rich_club_coefficient(const Network& network, DegreeMode mode, bool directed) {
  if (network.node_count() == 0) throw InvalidArgument("rich-club coefficient of an empty network");
  return curve_from(club_input(network, mode, directed), mode, directed);
}

NormalizedRichClubCurve normalized_rich_club(const Network& network, DegreeMode mode, bool directed,
                                             const NormalizeOptions& options) {
  if (options.n_random < 1) throw InvalidArgument("normalized rich-club needs n_random >= 1");
  const auto empirical = rich_club_coefficient(network, mode, directed);
  const auto n_rand = options.n_random;
  std::vector<RichClubCurve> nulls(n_rand);
  std::vector<SwapTrace> traces(n_rand);
  parallel_for(n_rand, options.workers, [&](std::size_t i) {
    const auto seed = derive_seed(options.seed, kRichClubStream, i);
    auto r = randomize(network, directed, options.swaps_per_edge, seed);
    traces[i] = r.trace;
    nulls[i] = rich_club_coefficient(r.network, mode, directed);
  });

  NormalizedRichClubCurve out;
  out.mode = empirical.mode;
  out.directed = directed;
  out.n_randomizations = n_rand;
  out.traces = std::move(traces);
  for (std::size_t idx = 0; idx < empirical.points.size(); ++idx) {
    const auto& e = empirical.points[idx];
    NormalizedRichClubPoint p;
    p.k = e.k;
    p.phi = e.phi;
    p.club_nodes = e.club_nodes;
    // Degree sequences are preserved, so every replicate has the same k range.
    double sum = 0.0;
    std::size_t defined = 0;
    std::vector<double> ratios;
    for (const auto& null : nulls) {
      const auto& np = null.points.at(idx);
      if (!np.phi) continue;
      sum += *np.phi;
      ++defined;
      if (e.phi && *np.phi > 0.0) ratios.push_back(*e.phi / *np.phi);
    }
    if (defined > 0) {
      p.phi_random_mean = sum / static_cast<double>(defined);
      if (e.phi && *p.phi_random_mean > 0.0) p.rho = *e.phi / *p.phi_random_mean;
    }
    if (p.rho && !ratios.empty()) {
      p.ci_low = percentile(ratios, 0.025);
      p.ci_high = percentile(ratios, 0.975);
    }
    out.points.push_back(p);
  }
  return out;
}

SwapConvergence swap_convergence(const Network& network, DegreeMode mode, bool directed,
                                 std::uint64_t seed, double short_sweeps, double long_sweeps) {
  auto total_club_edges = [&](double sweeps) {
    const auto r = randomize(network, directed, sweeps, seed);
    double total = 0.0;
    for (const auto& p : rich_club_coefficient(r.network, mode, directed).points) {
      total += static_cast<double>(p.club_edges);
    }
    return total;
  };
  const double a = total_club_edges(short_sweeps);
  const double b = total_club_edges(long_sweeps);
  SwapConvergence c;
  c.drift = b > 0.0 ? std::abs(a - b) / b : 0.0;
  c.converged = c.drift < 0.01;
  return c;
}

}  // namespace homophily
