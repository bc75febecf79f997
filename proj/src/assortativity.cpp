#include "homophily/assortativity.hpp"

#include <cmath>

#include "homophily/error.hpp"
#include "homophily/stats.hpp"

namespace homophily {

std::string_view to_string(CorrelationKind kind) {
  return kind == CorrelationKind::pearson ? "pearson" : "spearman";
}

AssortativityResult degree_assortativity(const Network& network, DegreeMode mode, CorrelationKind kind,
                                         bool log_shift) {
  const auto m = network.edge_count();
  if (m < 2) throw InvalidArgument("assortativity needs at least 2 edges");
  const auto deg = degrees(network);
  const auto& d = select(deg, mode);
  std::vector<double> src(m), dst(m);
  std::size_t i = 0;
  for (const auto& e : network.edges()) {
    src[i] = d[e.src];
    dst[i] = d[e.dst];
    ++i;
  }
  if (log_shift && kind == CorrelationKind::pearson) {
    for (auto& v : src) v = std::log(v + 1.0);
    for (auto& v : dst) v = std::log(v + 1.0);
  }
  AssortativityResult r{mode, kind, std::nullopt, m};
  try {
    if (kind == CorrelationKind::pearson) {
      r.value = stats::pearson_coefficient(src, dst);
    } else {
      r.value = stats::pearson_coefficient(stats::average_ranks(src), stats::average_ranks(dst));
    }
  } catch (const UndefinedError&) {
    throw UndefinedError("undefined assortativity: zero degree variance (" +
                         std::string(to_string(mode)) + " mode)");
  }
  return r;
}

std::vector<AssortativityResult> assortativity_table(const Network& network, bool log_shift) {
  std::vector<AssortativityResult> out;
  for (DegreeMode mode : {DegreeMode::total, DegreeMode::in, DegreeMode::out}) {
    for (CorrelationKind kind : {CorrelationKind::pearson, CorrelationKind::spearman}) {
      try {
        out.push_back(degree_assortativity(network, mode, kind, log_shift));
      } catch (const Error&) {
        out.push_back({mode, kind, std::nullopt, network.edge_count()});
      }
    }
  }
  return out;
}

}  // namespace homophily
