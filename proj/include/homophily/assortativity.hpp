#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "homophily/graph.hpp"

namespace homophily {

enum class CorrelationKind { pearson, spearman };

std::string_view to_string(CorrelationKind kind);

struct AssortativityResult {
  DegreeMode mode = DegreeMode::total;
  CorrelationKind kind = CorrelationKind::pearson;
  /// Absent when the coefficient is undefined (zero variance or < 2 edges).
  std::optional<double> value;
  std::size_t n_edges = 0;
};

// Degree assortativity of a directed network. Each edge (u, v) contributes
// the pair (deg(u), deg(v)) for the selected degree kind: total with total,
// in with in, out with out. With log_shift the Pearson variant correlates
// ln(deg + 1); Spearman is unaffected by the shift.
//
// Throws UndefinedError when either coordinate has zero variance and
// InvalidArgument when the network has fewer than 2 edges.
AssortativityResult degree_assortativity(const Network& network, DegreeMode mode, CorrelationKind kind,
                                         bool log_shift = false);

/// All six (mode, kind) combinations in the order r_total, rho_total, r_in,
/// rho_in, r_out, rho_out. Undefined cases come back with an empty value.
std::vector<AssortativityResult> assortativity_table(const Network& network, bool log_shift = false);

}  // namespace homophily
