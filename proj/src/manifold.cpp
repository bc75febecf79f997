#include "homophily/manifold.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "homophily/error.hpp"

namespace homophily {

namespace {

constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();

std::size_t parse_size(std::string_view s, std::size_t line) {
  std::size_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw ParseError("expected a non-negative integer, got '" + std::string(s) + "'", line);
  }
  return v;
}

Manifold lattice(std::size_t w, std::size_t h, bool wrap) {
  if (w == 0 || h == 0) throw InvalidArgument("lattice dimensions must be at least 1");
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  auto id = [w](std::size_t x, std::size_t y) { return static_cast<std::uint32_t>(y * w + x); };
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      if (x + 1 < w) edges.emplace_back(id(x, y), id(x + 1, y));
      else if (wrap && w > 1) edges.emplace_back(id(x, y), id(0, y));
      if (y + 1 < h) edges.emplace_back(id(x, y), id(x, y + 1));
      else if (wrap && h > 1) edges.emplace_back(id(x, y), id(x, 0));
    }
  }
  const std::string name = (wrap ? "torus" : "grid") + std::to_string(w) + "x" + std::to_string(h);
  return Manifold(name, wrap ? ManifoldKind::torus : ManifoldKind::grid, w * h, std::move(edges));
}

std::pair<std::size_t, std::size_t> parse_dims(std::string_view s) {
  const auto x = s.find('x');
  if (x == std::string_view::npos) throw InvalidArgument("expected WxH, got '" + std::string(s) + "'");
  return {parse_size(s.substr(0, x), 0), parse_size(s.substr(x + 1), 0)};
}

}  // namespace

Manifold::Manifold(std::string name, ManifoldKind kind, std::size_t neuron_count,
                   std::vector<std::pair<std::uint32_t, std::uint32_t>> edges)
    : name_(std::move(name)), kind_(kind), n_(neuron_count), adjacency_(neuron_count) {
  if (n_ == 0) throw InvalidArgument("manifold " + name_ + " has no neurons");
  for (auto& [a, b] : edges) {
    if (a >= n_ || b >= n_) throw InvalidArgument("manifold " + name_ + ": neuron id out of range");
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    edges_.emplace_back(a, b);
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (const auto& [a, b] : edges_) {
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }
  for (auto& list : adjacency_) std::sort(list.begin(), list.end());

  dist_.assign(n_ * n_, kUnreached);
  std::deque<std::uint32_t> queue;
  for (std::uint32_t s = 0; s < n_; ++s) {
    auto* row = &dist_[s * n_];
    row[s] = 0;
    queue.assign(1, s);
    while (!queue.empty()) {
      const auto u = queue.front();
      queue.pop_front();
      for (auto v : adjacency_[u]) {
        if (row[v] == kUnreached) {
          row[v] = row[u] + 1;
          queue.push_back(v);
        }
      }
    }
    for (std::size_t t = 0; t < n_; ++t) {
      if (row[t] == kUnreached) throw InvalidArgument("manifold " + name_ + " is disconnected");
      diameter_ = std::max(diameter_, row[t]);
    }
  }
}

Manifold make_grid(std::size_t width, std::size_t height) { return lattice(width, height, false); }
Manifold make_torus(std::size_t width, std::size_t height) { return lattice(width, height, true); }

Manifold load_manifold(std::istream& in, std::string name) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t n = 0;
  bool have_n = false;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string tag;
    if (!(fields >> tag)) continue;
    std::vector<std::string> args;
    for (std::string a; fields >> a;) args.push_back(a);
    if (tag == "n") {
      if (have_n) throw ParseError("duplicate neuron count", line_no);
      if (args.size() != 1) throw ParseError("expected 'n <count>'", line_no);
      n = parse_size(args[0], line_no);
      have_n = true;
    } else if (tag == "e") {
      if (!have_n) throw ParseError("edge before neuron count", line_no);
      if (args.size() != 2) throw ParseError("expected 'e <i> <j>'", line_no);
      const auto a = parse_size(args[0], line_no);
      const auto b = parse_size(args[1], line_no);
      if (a >= n || b >= n) throw ParseError("neuron id out of range", line_no);
      edges.emplace_back(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b));
    } else {
      throw ParseError("unknown record '" + tag + "'", line_no);
    }
  }
  if (!have_n) throw ParseError("missing neuron count", line_no);
  return Manifold(std::move(name), ManifoldKind::file, n, std::move(edges));
}

Manifold load_manifold_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open manifold file: " + path);
  return load_manifold(in, std::filesystem::path(path).stem().string());
}

void write_manifold(std::ostream& out, const Manifold& manifold) {
  out << "# " << manifold.name() << "\n";
  out << "n " << manifold.neuron_count() << "\n";
  for (const auto& [a, b] : manifold.edges()) out << "e " << a << ' ' << b << "\n";
}

Manifold make_klein_quartic() {
  // Heptagonal tiles of the {7,3} tessellation of the PSL(2,7) Hurwitz surface.
  static const std::uint32_t kEdges[][2] = {
      {0, 1}, {0, 6}, {0, 8}, {0, 10}, {0, 15}, {0, 17}, {0, 21}, {1, 2}, {1, 10}, {1, 12},
      {1, 18}, {1, 20}, {1, 21}, {2, 3}, {2, 7}, {2, 12}, {2, 14}, {2, 16}, {2, 21}, {3, 4},
      {3, 7}, {3, 9}, {3, 17}, {3, 19}, {3, 21}, {4, 5}, {4, 9}, {4, 11}, {4, 15}, {4, 20},
      {4, 21}, {5, 6}, {5, 11}, {5, 13}, {5, 16}, {5, 18}, {5, 21}, {6, 8}, {6, 13}, {6, 14},
      {6, 19}, {6, 21}, {7, 10}, {7, 11}, {7, 16}, {7, 17}, {7, 22}, {8, 11}, {8, 12}, {8, 14},
      {8, 15}, {8, 22}, {9, 12}, {9, 13}, {9, 19}, {9, 20}, {9, 22}, {10, 13}, {10, 17}, {10, 18},
      {10, 22}, {11, 15}, {11, 16}, {11, 22}, {12, 14}, {12, 20}, {12, 22}, {13, 18}, {13, 19},
      {13, 22}, {14, 16}, {14, 19}, {14, 23}, {15, 17}, {15, 20}, {15, 23}, {16, 18}, {16, 23},
      {17, 19}, {17, 23}, {18, 20}, {18, 23}, {19, 23}, {20, 23},
  };
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (const auto& e : kEdges) edges.emplace_back(e[0], e[1]);
  return Manifold("klein_quartic", ManifoldKind::file, 24, std::move(edges));
}

Manifold build_manifold(const std::string& spec) {
  if (spec == "klein") return make_klein_quartic();
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw InvalidArgument("manifold spec must be kind:args: " + spec);
  const auto kind = spec.substr(0, colon);
  const auto args = spec.substr(colon + 1);
  if (kind == "grid") {
    const auto [w, h] = parse_dims(args);
    return make_grid(w, h);
  }
  if (kind == "torus") {
    const auto [w, h] = parse_dims(args);
    return make_torus(w, h);
  }
  if (kind == "file") return load_manifold_file(args);
  throw InvalidArgument("unknown manifold kind: " + kind);
}

MetricCheck verify_metric_axioms(const Manifold& m) {
  MetricCheck c;
  const auto n = static_cast<std::uint32_t>(m.neuron_count());
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) {
      const auto dij = m.distance(i, j);
      if ((dij == 0) != (i == j)) c.identity = false;
      if (dij != m.distance(j, i)) c.symmetry = false;
      for (std::uint32_t k = 0; k < n; ++k) {
        if (m.distance(i, k) > dij + m.distance(j, k)) c.triangle = false;
      }
    }
  }
  return c;
}

}  // namespace homophily
