#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace homophily {

using NodeId = std::uint32_t;

enum class Layer { following, starring, forking, issues, pulls, comments, other };

std::string_view to_string(Layer layer);
/// Unknown names map to Layer::other.
Layer parse_layer(std::string_view name);

struct Edge {
  NodeId src;
  NodeId dst;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Bijective external label <-> dense id mapping.
class LabelTable {
 public:
  /// Returns the id of `label`, inserting it with the next free id if new.
  NodeId intern(std::string_view label);
  std::optional<NodeId> find(std::string_view label) const;
  const std::string& label(NodeId id) const { return labels_.at(id); }
  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> ids_;
};

/// Directed interaction network of a single layer. Immutable once built.
class Network {
 public:
  Network() = default;
  /// Throws InvalidArgument if an endpoint is >= node_count or labels disagree in size.
  Network(std::size_t node_count, std::vector<Edge> edges, Layer layer = Layer::other,
          LabelTable labels = {});

  std::size_t node_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }
  Layer layer() const noexcept { return layer_; }
  const LabelTable& labels() const noexcept { return labels_; }
  bool has_labels() const noexcept { return labels_.size() == n_ && n_ > 0; }

  /// Edges sorted by (src, dst).
  std::vector<Edge> canonical_edges() const;
  bool has_self_loops() const;
  bool has_duplicate_edges() const;

  /// Same nodes and labels, different edge list.
  Network with_edges(std::vector<Edge> edges) const;

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  Layer layer_ = Layer::other;
  LabelTable labels_;
};

enum class EdgeListFormat { csv, tsv };
enum class HeaderMode { detect, present, absent };

struct EdgeListOptions {
  EdgeListFormat format = EdgeListFormat::csv;
  bool dedup = true;
  bool drop_self_loops = true;
  HeaderMode header = HeaderMode::detect;
  /// In detect mode with numeric labels, a first line whose first field is
  /// not an integer is a header. With string labels only the well-known
  /// header names (src, dst, source, target, from, to) are recognised.
  bool numeric_labels = false;
  Layer layer = Layer::other;
};

/// Parses "src<sep>dst" lines. Blank lines and lines starting with '#' are skipped.
Network load_edge_list(std::istream& in, const EdgeListOptions& options = {});
Network load_edge_list_file(const std::string& path, const EdgeListOptions& options = {});

/// Parses with an existing label table so several layers share node ids.
/// Unknown labels are appended to `labels`.
std::vector<Edge> parse_edges(std::istream& in, const EdgeListOptions& options, LabelTable& labels);

struct DegreeVector {
  std::vector<std::uint32_t> in;
  std::vector<std::uint32_t> out;
  std::vector<std::uint32_t> total;
  std::size_t size() const noexcept { return in.size(); }
};

DegreeVector degrees(const Network& network);

enum class DegreeMode { total, in, out };

std::string_view to_string(DegreeMode mode);
/// Throws InvalidArgument for names other than total, in, out.
DegreeMode parse_degree_mode(std::string_view name);

/// The per-node degree column selected by `mode`.
const std::vector<std::uint32_t>& select(const DegreeVector& d, DegreeMode mode);

/// Simple undirected neighbour lists: edge direction dropped, duplicates and
/// self-loops removed, each list sorted.
std::vector<std::vector<NodeId>> undirected_adjacency(const Network& network);

struct CentralityOptions {
  double tolerance = 1e-10;
  int max_iterations = 10000;
};

/// Eigenvector centrality of the symmetrised graph, unit Euclidean norm.
/// Throws InvalidArgument on an empty network, ConvergenceError (with the
/// last iterate) when max_iterations is exhausted.
std::vector<double> eigenvector_centrality(const Network& network, const CentralityOptions& options = {});

struct AccountRecord {
  std::string record_id;
  std::optional<std::string> gravatar;
  std::optional<std::string> login;
  /// ISO-8601 timestamp or date; only the date part (first 10 chars) is used.
  std::optional<std::string> registered;
};

struct EntityPartition {
  /// entity_of[i] is the entity of records[i].
  std::vector<std::size_t> entity_of;
  std::size_t entity_count = 0;

  std::vector<std::vector<std::size_t>> groups() const;
};

/// Links records sharing a gravatar hash or a (login, registration date)
/// pair and returns the connected components. Entity ids are numbered by
/// the lexicographically smallest record id in each entity, so the result
/// does not depend on input order.
EntityPartition unify_accounts(std::span<const AccountRecord> records);

/// Reads "record_id,gravatar,login,registered" CSV (header required, empty
/// cells are missing keys).
std::vector<AccountRecord> load_account_records(std::istream& in);
void write_entity_map(std::ostream& out, std::span<const AccountRecord> records,
                      const EntityPartition& partition);

}  // namespace homophily
