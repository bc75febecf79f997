#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "homophily/graph.hpp"
#include "homophily/nullmodel.hpp"

namespace homophily {

struct RichClubPoint {
  std::uint32_t k = 0;
  /// Absent when the club has fewer than 2 nodes.
  std::optional<double> phi;
  std::size_t club_nodes = 0;
  std::size_t club_edges = 0;
};

// phi(k) = E_k / E_max over the club of nodes with degree >= k, for
// k = 1..max degree. Directed: degrees of kind `mode`, directed edges,
// E_max = m(m-1). Undirected: degrees and edges of the undirected simple
// graph (mode is ignored), E_max = m(m-1)/2.
struct RichClubCurve {
  DegreeMode mode = DegreeMode::total;
  bool directed = true;
  std::vector<RichClubPoint> points;
};

RichClubCurve rich_club_coefficient(const Network& network, DegreeMode mode, bool directed);

struct NormalizedRichClubPoint {
  std::uint32_t k = 0;
  std::optional<double> phi;
  std::size_t club_nodes = 0;
  /// Mean phi over the null replicates (absent where no replicate defines phi).
  std::optional<double> phi_random_mean;
  /// phi / mean phi_random; absent where the null mean is 0 or phi is undefined.
  std::optional<double> rho;
  /// 2.5 and 97.5 percentiles of phi / phi_random over replicates.
  std::optional<double> ci_low;
  std::optional<double> ci_high;
};

struct NormalizedRichClubCurve {
  DegreeMode mode = DegreeMode::total;
  bool directed = true;
  std::size_t n_randomizations = 0;
  std::vector<NormalizedRichClubPoint> points;
  std::vector<SwapTrace> traces;
};

struct NormalizeOptions {
  std::size_t n_random = 50;
  double swaps_per_edge = 10.0;
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

/// Normalises against degree-preserving randomisations (directed swaps for
/// directed analysis, undirected swaps otherwise). Deterministic given seed.
NormalizedRichClubCurve normalized_rich_club(const Network& network, DegreeMode mode, bool directed,
                                             const NormalizeOptions& options = {});

struct SwapConvergence {
  double drift = 0.0;
  bool converged = false;
};

// Relative change in the summed club edge counts sum_k E_k of one randomised
// replicate between `short_sweeps` and `long_sweeps` swaps per edge. The
// default swap budget is considered converged below 1%.
SwapConvergence swap_convergence(const Network& network, DegreeMode mode, bool directed,
                                 std::uint64_t seed, double short_sweeps = 5.0,
                                 double long_sweeps = 10.0);

}  // namespace homophily
