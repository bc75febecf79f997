#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace homophily {

enum class ManifoldKind { grid, torus, file };

/// Finite neuron lattice with the shortest-path hop metric.
class Manifold {
 public:
  /// Builds from an undirected neuron adjacency. Throws InvalidArgument if
  /// the graph is empty, has out-of-range endpoints or is disconnected.
  Manifold(std::string name, ManifoldKind kind, std::size_t neuron_count,
           std::vector<std::pair<std::uint32_t, std::uint32_t>> edges);

  const std::string& name() const noexcept { return name_; }
  ManifoldKind kind() const noexcept { return kind_; }
  std::size_t neuron_count() const noexcept { return n_; }
  /// Deduplicated (i < j) pairs, sorted.
  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges() const noexcept { return edges_; }
  const std::vector<std::uint32_t>& neighbours(std::uint32_t i) const { return adjacency_.at(i); }
  std::uint32_t distance(std::uint32_t a, std::uint32_t b) const { return dist_[a * n_ + b]; }
  std::uint32_t diameter() const noexcept { return diameter_; }

 private:
  std::string name_;
  ManifoldKind kind_;
  std::size_t n_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges_;
  std::vector<std::vector<std::uint32_t>> adjacency_;
  std::vector<std::uint32_t> dist_;
  std::uint32_t diameter_ = 0;
};

/// width x height lattice, 4-neighbourhood, no wrap. Neuron id = y * width + x.
Manifold make_grid(std::size_t width, std::size_t height);
/// As make_grid but wrapping in both directions.
Manifold make_torus(std::size_t width, std::size_t height);

/// Reads "n <count>" followed by "e <i> <j>" lines; '#' starts a comment.
Manifold load_manifold(std::istream& in, std::string name);
Manifold load_manifold_file(const std::string& path);
void write_manifold(std::ostream& out, const Manifold& manifold);

/// The 24-tile Klein quartic: 7-regular, 84 edges, diameter 3.
Manifold make_klein_quartic();

/// Parses "grid:WxH", "torus:WxH", "klein" or "file:<path>".
Manifold build_manifold(const std::string& spec);

struct MetricCheck {
  bool identity = true;
  bool symmetry = true;
  bool triangle = true;
  bool ok() const noexcept { return identity && symmetry && triangle; }
};

/// Exhaustive O(n^3) check of the metric axioms on the distance matrix.
MetricCheck verify_metric_axioms(const Manifold& manifold);

}  // namespace homophily
