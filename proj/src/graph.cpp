#include "homophily/graph.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <unordered_set>

#include "homophily/csv.hpp"
#include "homophily/error.hpp"
#include "homophily/union_find.hpp"

namespace homophily {

namespace {

constexpr std::array<std::pair<Layer, std::string_view>, 7> kLayerNames{{
    {Layer::following, "following"},
    {Layer::starring, "starring"},
    {Layer::forking, "forking"},
    {Layer::issues, "issues"},
    {Layer::pulls, "pulls"},
    {Layer::comments, "comments"},
    {Layer::other, "other"},
}};

bool is_integer(std::string_view s) {
  if (s.empty()) return false;
  long long v;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

bool is_header_name(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (std::string_view name : {"src", "dst", "source", "target", "from", "to"}) {
    if (lower == name) return true;
  }
  return false;
}

std::uint64_t edge_key(NodeId s, NodeId d) { return (std::uint64_t{s} << 32) | d; }

}  // namespace

std::string_view to_string(Layer layer) {
  for (const auto& [l, name] : kLayerNames) {
    if (l == layer) return name;
  }
  return "other";
}

Layer parse_layer(std::string_view name) {
  for (const auto& [l, n] : kLayerNames) {
    if (n == name) return l;
  }
  return Layer::other;
}

NodeId LabelTable::intern(std::string_view label) {
  std::string key(label);
  if (auto it = ids_.find(key); it != ids_.end()) return it->second;
  const auto id = static_cast<NodeId>(labels_.size());
  labels_.push_back(key);
  ids_.emplace(std::move(key), id);
  return id;
}

std::optional<NodeId> LabelTable::find(std::string_view label) const {
  if (auto it = ids_.find(std::string(label)); it != ids_.end()) return it->second;
  return std::nullopt;
}

Network::Network(std::size_t node_count, std::vector<Edge> edges, Layer layer, LabelTable labels)
    : n_(node_count), edges_(std::move(edges)), layer_(layer), labels_(std::move(labels)) {
  if (labels_.size() != 0 && labels_.size() != n_) {
    throw InvalidArgument("label table size does not match node count");
  }
  for (const auto& e : edges_) {
    if (e.src >= n_ || e.dst >= n_) throw InvalidArgument("edge endpoint out of range");
  }
}

std::vector<Edge> Network::canonical_edges() const {
  auto sorted = edges_;
  std::sort(sorted.begin(), sorted.end());
  return sorted;
}

bool Network::has_self_loops() const {
  return std::any_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.src == e.dst; });
}

bool Network::has_duplicate_edges() const {
  const auto sorted = canonical_edges();
  return std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
}

Network Network::with_edges(std::vector<Edge> edges) const {
  return Network(n_, std::move(edges), layer_, labels_);
}

std::vector<Edge> parse_edges(std::istream& in, const EdgeListOptions& options, LabelTable& labels) {
  const char sep = options.format == EdgeListFormat::csv ? ',' : '\t';
  std::vector<Edge> edges;
  std::unordered_set<std::uint64_t> seen;
  std::string line;
  std::size_t line_no = 0;
  bool first_record = true;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = csv::trim(line);
    if (body.empty() || body.front() == '#') continue;
    auto fields = csv::split(body, sep);
    if (fields.size() != 2) {
      throw ParseError("expected 2 fields, found " + std::to_string(fields.size()), line_no);
    }
    const auto src = csv::trim(fields[0]);
    const auto dst = csv::trim(fields[1]);
    if (first_record) {
      first_record = false;
      bool header = options.header == HeaderMode::present;
      if (options.header == HeaderMode::detect) {
        header = options.numeric_labels ? !is_integer(src)
                                        : (is_header_name(src) && is_header_name(dst));
      }
      if (header) continue;
    }
    if (src.empty() || dst.empty()) throw ParseError("empty node label", line_no);
    if (options.numeric_labels && (!is_integer(src) || !is_integer(dst))) {
      throw ParseError("non-numeric node label", line_no);
    }
    const NodeId s = labels.intern(src);
    const NodeId d = labels.intern(dst);
    if (options.drop_self_loops && s == d) continue;
    if (options.dedup && !seen.insert(edge_key(s, d)).second) continue;
    edges.push_back({s, d});
  }
  return edges;
}

Network load_edge_list(std::istream& in, const EdgeListOptions& options) {
  LabelTable labels;
  auto edges = parse_edges(in, options, labels);
  const auto n = labels.size();
  return Network(n, std::move(edges), options.layer, std::move(labels));
}

Network load_edge_list_file(const std::string& path, const EdgeListOptions& options) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open edge list: " + path);
  return load_edge_list(in, options);
}

DegreeVector degrees(const Network& network) {
  const auto n = network.node_count();
  DegreeVector d{std::vector<std::uint32_t>(n), std::vector<std::uint32_t>(n),
                 std::vector<std::uint32_t>(n)};
  for (const auto& e : network.edges()) {
    ++d.out[e.src];
    ++d.in[e.dst];
  }
  for (std::size_t i = 0; i < n; ++i) d.total[i] = d.in[i] + d.out[i];
  return d;
}

std::string_view to_string(DegreeMode mode) {
  switch (mode) {
    case DegreeMode::in: return "in";
    case DegreeMode::out: return "out";
    case DegreeMode::total: break;
  }
  return "total";
}

DegreeMode parse_degree_mode(std::string_view name) {
  if (name == "total") return DegreeMode::total;
  if (name == "in") return DegreeMode::in;
  if (name == "out") return DegreeMode::out;
  throw InvalidArgument("unknown degree mode: " + std::string(name));
}

const std::vector<std::uint32_t>& select(const DegreeVector& d, DegreeMode mode) {
  switch (mode) {
    case DegreeMode::in: return d.in;
    case DegreeMode::out: return d.out;
    case DegreeMode::total: break;
  }
  return d.total;
}

std::vector<std::vector<NodeId>> undirected_adjacency(const Network& network) {
  std::vector<std::vector<NodeId>> adj(network.node_count());
  for (const auto& e : network.edges()) {
    if (e.src == e.dst) continue;
    adj[e.src].push_back(e.dst);
    adj[e.dst].push_back(e.src);
  }
  for (auto& list : adj) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return adj;
}

std::vector<double> eigenvector_centrality(const Network& network, const CentralityOptions& options) {
  const auto n = network.node_count();
  if (n == 0) throw InvalidArgument("eigenvector centrality of an empty network");
  const auto adj = undirected_adjacency(network);
  // Iterating with A + I keeps the eigenvectors of A but makes the dominant
  // eigenvalue strictly largest in modulus, so bipartite graphs converge too.
  std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> next(n);
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    for (std::size_t v = 0; v < n; ++v) {
      double sum = x[v];
      for (NodeId u : adj[v]) sum += x[u];
      next[v] = sum;
    }
    double norm = 0.0;
    for (double v : next) norm += v * v;
    norm = std::sqrt(norm);
    double diff = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      next[v] /= norm;
      diff = std::max(diff, std::abs(next[v] - x[v]));
    }
    x.swap(next);
    if (diff < options.tolerance) return x;
  }
  throw ConvergenceError("eigenvector centrality did not converge in " +
                             std::to_string(options.max_iterations) + " iterations",
                         std::move(x));
}

std::vector<std::vector<std::size_t>> EntityPartition::groups() const {
  std::vector<std::vector<std::size_t>> out(entity_count);
  for (std::size_t i = 0; i < entity_of.size(); ++i) out[entity_of[i]].push_back(i);
  return out;
}

EntityPartition unify_accounts(std::span<const AccountRecord> records) {
  const auto n = records.size();
  UnionFind uf(n);
  std::map<std::string, std::size_t> by_gravatar;
  std::map<std::pair<std::string, std::string>, std::size_t> by_login;
  auto key = [](const std::optional<std::string>& v) -> std::optional<std::string> {
    if (!v) return std::nullopt;
    auto t = csv::trim(*v);
    if (t.empty()) return std::nullopt;
    return std::string(t);
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (auto g = key(records[i].gravatar)) {
      auto [it, inserted] = by_gravatar.emplace(*g, i);
      if (!inserted) uf.unite(it->second, i);
    }
    auto login = key(records[i].login);
    auto reg = key(records[i].registered);
    if (login && reg) {
      auto date = reg->substr(0, 10);
      auto [it, inserted] = by_login.emplace(std::pair{*login, date}, i);
      if (!inserted) uf.unite(it->second, i);
    }
  }
  // Canonical numbering: order entities by their smallest record id.
  std::vector<std::size_t> min_member(n, SIZE_MAX);
  for (std::size_t i = 0; i < n; ++i) {
    auto& m = min_member[uf.find(i)];
    if (m == SIZE_MAX || records[i].record_id < records[m].record_id ||
        (records[i].record_id == records[m].record_id && i < m)) {
      m = i;
    }
  }
  std::vector<std::size_t> roots;
  for (std::size_t i = 0; i < n; ++i) {
    if (uf.find(i) == i) roots.push_back(i);
  }
  std::sort(roots.begin(), roots.end(), [&](std::size_t a, std::size_t b) {
    return records[min_member[a]].record_id < records[min_member[b]].record_id;
  });
  std::vector<std::size_t> entity_of_root(n);
  for (std::size_t e = 0; e < roots.size(); ++e) entity_of_root[roots[e]] = e;
  EntityPartition p;
  p.entity_count = roots.size();
  p.entity_of.resize(n);
  for (std::size_t i = 0; i < n; ++i) p.entity_of[i] = entity_of_root[uf.find(i)];
  return p;
}

std::vector<AccountRecord> load_account_records(std::istream& in) {
  std::vector<AccountRecord> out;
  std::string line;
  std::size_t line_no = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (csv::trim(line).empty()) continue;
    auto f = csv::split(line);
    if (header) {
      header = false;
      continue;
    }
    if (f.size() != 4) throw ParseError("expected 4 fields", line_no);
    auto opt = [](const std::string& s) -> std::optional<std::string> {
      if (csv::trim(s).empty()) return std::nullopt;
      return std::string(csv::trim(s));
    };
    out.push_back({std::string(csv::trim(f[0])), opt(f[1]), opt(f[2]), opt(f[3])});
  }
  return out;
}

void write_entity_map(std::ostream& out, std::span<const AccountRecord> records,
                      const EntityPartition& partition) {
  csv::write_row(out, {"record_id", "entity_id"});
  for (std::size_t i = 0; i < records.size(); ++i) {
    csv::write_row(out, {records[i].record_id, std::to_string(partition.entity_of[i])});
  }
}

}  // namespace homophily
