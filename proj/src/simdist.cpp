#include "homophily/simdist.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "homophily/error.hpp"
#include "homophily/parallel.hpp"
#include "homophily/random.hpp"

namespace homophily {

namespace {

constexpr std::uint64_t kNullStream = 0x4e554c4c;  // "NULL"

std::uint64_t pair_key(std::size_t a, std::size_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

double euclidean(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

void grow(std::vector<std::uint64_t>& v, std::size_t index) {
  if (v.size() <= index) v.resize(index + 1, 0);
}

}  // namespace

std::uint32_t pair_distance(std::span<const std::uint32_t> runs_u, std::span<const std::uint32_t> runs_v,
                            const Manifold& manifold) {
  if (runs_u.empty() || runs_u.size() != runs_v.size()) {
    throw InvalidArgument("pair_distance needs equally many (>= 1) runs for both users");
  }
  std::uint64_t sum = 0;
  for (std::size_t r = 0; r < runs_u.size(); ++r) sum += manifold.distance(runs_u[r], runs_v[r]);
  const std::uint64_t runs = runs_u.size();
  // round(sum / runs) with halves away from zero, in integers.
  return static_cast<std::uint32_t>((2 * sum + runs) / (2 * runs));
}

DistanceAssignment::DistanceAssignment(std::shared_ptr<const Manifold> manifold,
                                       std::vector<std::string> users,
                                       std::vector<std::vector<std::int32_t>> runs)
    : manifold_(std::move(manifold)), users_(std::move(users)), run_count_(runs.size()) {
  if (!manifold_) throw InvalidArgument("distance assignment needs a manifold");
  if (run_count_ == 0) throw InvalidArgument("distance assignment needs at least one run");
  const auto n = users_.size();
  neurons_.assign(n * run_count_, 0);
  assigned_.assign(n, true);
  for (std::size_t r = 0; r < run_count_; ++r) {
    if (runs[r].size() != n) throw InvalidArgument("run assignment length differs from user count");
    for (std::size_t u = 0; u < n; ++u) {
      const auto neuron = runs[r][u];
      if (neuron == kUnassigned) {
        assigned_[u] = false;
        continue;
      }
      if (neuron < 0 || static_cast<std::size_t>(neuron) >= manifold_->neuron_count()) {
        throw InvalidArgument("neuron id out of range in run assignment");
      }
      neurons_[u * run_count_ + r] = static_cast<std::uint32_t>(neuron);
    }
  }
}

std::uint32_t DistanceAssignment::distance(std::size_t u, std::size_t v) const {
  return pair_distance({neurons_.data() + u * run_count_, run_count_},
                       {neurons_.data() + v * run_count_, run_count_}, *manifold_);
}

std::int32_t DistanceAssignment::neuron(std::size_t run, std::size_t user) const {
  if (!assigned_.at(user)) return kUnassigned;
  return static_cast<std::int32_t>(neurons_[user * run_count_ + run]);
}

EuclideanBuckets::EuclideanBuckets(Matrix data, std::vector<std::string> users,
                                   std::vector<double> upper_bounds)
    : data_(std::move(data)), users_(std::move(users)), upper_bounds_(std::move(upper_bounds)) {
  if (users_.size() != data_.rows()) throw InvalidArgument("user labels do not match data rows");
}

std::uint32_t EuclideanBuckets::bucket_of(double d) const {
  return static_cast<std::uint32_t>(
      std::lower_bound(upper_bounds_.begin(), upper_bounds_.end(), d) - upper_bounds_.begin());
}

std::uint32_t EuclideanBuckets::distance(std::size_t u, std::size_t v) const {
  return bucket_of(euclidean(data_.row(u), data_.row(v)));
}

EuclideanBuckets naive_euclidean_baseline(const Matrix& data, std::vector<std::string> users,
                                          std::size_t n_buckets, std::size_t sample_size,
                                          std::uint64_t seed) {
  if (n_buckets < 2) throw InvalidArgument("naive baseline needs at least 2 buckets");
  const auto n = data.rows();
  if (n < 2) throw InvalidArgument("naive baseline needs at least 2 rows");
  const auto all_pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  std::vector<double> sample;
  if (all_pairs <= sample_size) {
    sample.reserve(all_pairs);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) sample.push_back(euclidean(data.row(i), data.row(j)));
    }
  } else {
    Rng rng(seed);
    sample.reserve(sample_size);
    for (std::size_t s = 0; s < sample_size; ++s) {
      const auto i = static_cast<std::size_t>(rng.below(n));
      auto j = static_cast<std::size_t>(rng.below(n - 1));
      if (j >= i) ++j;
      sample.push_back(euclidean(data.row(i), data.row(j)));
    }
  }
  std::sort(sample.begin(), sample.end());
  std::vector<double> values;
  std::vector<std::size_t> cumulative;  // samples <= values[i]
  for (std::size_t i = 0; i < sample.size(); ++i) {
    if (values.empty() || sample[i] != values.back()) {
      values.push_back(sample[i]);
      cumulative.push_back(0);
    }
    cumulative.back() = i + 1;
  }
  if (values.size() == 1) return EuclideanBuckets(data, std::move(users), {});
  if (values.size() < n_buckets) {
    throw InvalidArgument("only " + std::to_string(values.size()) + " distinct pair distances for " +
                          std::to_string(n_buckets) + " buckets");
  }
  // Cut q closes bucket q-1 at a distinct value; cuts strictly increase and
  // leave at least one distinct value for each later bucket.
  std::vector<double> bounds;
  std::size_t cut = 0;
  const double total = static_cast<double>(sample.size());
  for (std::size_t q = 1; q < n_buckets; ++q) {
    const double target = total * static_cast<double>(q) / static_cast<double>(n_buckets);
    std::size_t i = bounds.empty() ? 0 : cut + 1;
    while (i < values.size() && static_cast<double>(cumulative[i]) < target) ++i;
    i = std::min(i, values.size() - 1 - (n_buckets - q));
    if (!bounds.empty()) i = std::max(i, cut + 1);
    cut = i;
    bounds.push_back(values[i]);
  }
  return EuclideanBuckets(data, std::move(users), std::move(bounds));
}

namespace {

std::size_t triangle_index(std::size_t u, std::size_t v, std::size_t n) {
  // row u holds v in (u, n)
  return u * (2 * n - u - 1) / 2 + (v - u - 1);
}

}  // namespace

CachedDistance::CachedDistance(const PairDistance& source, unsigned workers)
    : users_(source.users()), assigned_(source.user_count()) {
  const auto n = users_.size();
  for (std::size_t u = 0; u < n; ++u) assigned_[u] = source.assigned(u);
  upper_.assign(n < 2 ? 0 : n * (n - 1) / 2, 0);
  parallel_for(n, workers, [&](std::size_t u) {
    if (!assigned_[u]) return;
    for (std::size_t v = u + 1; v < n; ++v) {
      if (!assigned_[v]) continue;
      const auto d = source.distance(u, v);
      if (d > UINT16_MAX) throw InvalidArgument("distance too large to cache");
      upper_[triangle_index(u, v, n)] = static_cast<std::uint16_t>(d);
    }
  });
}

std::uint32_t CachedDistance::distance(std::size_t u, std::size_t v) const {
  if (u == v) return 0;
  if (u > v) std::swap(u, v);
  return upper_[triangle_index(u, v, users_.size())];
}

std::vector<std::int64_t> align_nodes(const Network& network, const PairDistance& distances) {
  std::vector<std::int64_t> user_of(network.node_count(), -1);
  if (network.has_labels()) {
    LabelTable index;
    for (const auto& u : distances.users()) index.intern(u);
    for (NodeId v = 0; v < network.node_count(); ++v) {
      if (auto u = index.find(network.labels().label(v)); u && distances.assigned(*u)) {
        user_of[v] = *u;
      }
    }
  } else {
    for (NodeId v = 0; v < network.node_count() && v < distances.user_count(); ++v) {
      if (distances.assigned(v)) user_of[v] = v;
    }
  }
  return user_of;
}

LinkDistanceHistogram link_distance_distribution(const Network& network, const PairDistance& distances) {
  const auto user_of = align_nodes(network, distances);
  LinkDistanceHistogram h;
  h.layer = network.layer();
  h.total_edges = network.edge_count();
  for (const auto& e : network.edges()) {
    const auto u = user_of[e.src], v = user_of[e.dst];
    if (u < 0 || v < 0) {
      ++h.unassigned_edges;
      continue;
    }
    ++h.counts[distances.distance(static_cast<std::size_t>(u), static_cast<std::size_t>(v))];
  }
  return h;
}

std::vector<double> edge_distance_sample(const Network& network, const PairDistance& distances) {
  const auto user_of = align_nodes(network, distances);
  std::vector<double> out;
  out.reserve(network.edge_count());
  for (const auto& e : network.edges()) {
    const auto u = user_of[e.src], v = user_of[e.dst];
    if (u < 0 || v < 0) continue;
    out.push_back(distances.distance(static_cast<std::size_t>(u), static_cast<std::size_t>(v)));
  }
  return out;
}

NullComparison null_distribution_comparison(const Network& network, const PairDistance& distances,
                                            const NullComparisonOptions& options) {
  if (options.n_sims < 1) throw InvalidArgument("null comparison needs n_sims >= 1");
  const auto empirical_sample = edge_distance_sample(network, distances);
  if (empirical_sample.empty()) throw InvalidArgument("no edges to compare");
  NullComparison out;
  out.alpha = options.alpha;
  out.empirical = link_distance_distribution(network, distances);
  out.simulations.resize(options.n_sims);
  parallel_for(options.n_sims, options.workers, [&](std::size_t i) {
    auto r = randomize_degree_preserving(network, options.swaps_per_edge,
                                         derive_seed(options.seed, kNullStream, i));
    auto& sim = out.simulations[i];
    sim.trace = r.trace;
    sim.histogram = link_distance_distribution(r.network, distances);
    const auto null_sample = edge_distance_sample(r.network, distances);
    sim.ks = stats::ks_two_sample(empirical_sample, null_sample);
  });
  std::size_t rejected = 0;
  for (const auto& s : out.simulations) rejected += s.ks.p_value < options.alpha ? 1 : 0;
  out.rejection_fraction = static_cast<double>(rejected) / static_cast<double>(options.n_sims);
  return out;
}

double bernoulli_log_likelihood(std::span<const std::uint64_t> pairs, std::span<const std::uint64_t> links) {
  double ell = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto n = pairs[i];
    const auto k = i < links.size() ? links[i] : 0;
    if (n == 0) continue;
    const double p = static_cast<double>(k) / static_cast<double>(n);
    if (k > 0) ell += static_cast<double>(k) * std::log(p);
    if (k < n) ell += static_cast<double>(n - k) * std::log1p(-p);
  }
  return ell;
}

ModelScore score_model(const Network& network, const PairDistance& distances,
                       std::span<const std::int32_t> clusters, const ScoreOptions& options) {
  const bool with_clusters = !clusters.empty();
  if (with_clusters && clusters.size() != distances.user_count()) {
    throw InvalidArgument("cluster assignment length differs from user count");
  }
  const auto user_of = align_nodes(network, distances);
  // Universe: network nodes with an assignment (and a cluster, when used).
  std::vector<std::size_t> members;
  std::vector<std::int64_t> member_of_node(network.node_count(), -1);
  for (NodeId v = 0; v < network.node_count(); ++v) {
    const auto u = user_of[v];
    if (u < 0) continue;
    if (with_clusters && clusters[static_cast<std::size_t>(u)] < 0) continue;
    member_of_node[v] = static_cast<std::int64_t>(members.size());
    members.push_back(static_cast<std::size_t>(u));
  }
  const auto n = members.size();
  if (n < 2) throw InvalidArgument("score_model needs at least 2 assigned nodes");

  std::int32_t max_neuron = 0;
  if (with_clusters) {
    for (auto c : clusters) max_neuron = std::max(max_neuron, c);
  }
  const auto neurons = static_cast<std::size_t>(max_neuron) + 1;
  auto cell = [&](std::size_t a, std::size_t b) {
    auto ca = static_cast<std::size_t>(clusters[members[a]]);
    auto cb = static_cast<std::size_t>(clusters[members[b]]);
    if (ca > cb) std::swap(ca, cb);
    return ca * neurons + cb;
  };

  std::unordered_set<std::uint64_t> linked;
  for (const auto& e : network.edges()) {
    const auto a = member_of_node[e.src], b = member_of_node[e.dst];
    if (a < 0 || b < 0 || a == b) continue;
    linked.insert(pair_key(static_cast<std::size_t>(a), static_cast<std::size_t>(b)));
  }

  std::vector<std::uint64_t> pairs_d, links_d, pairs_c, links_c;
  if (with_clusters) {
    pairs_c.assign(neurons * neurons, 0);
    links_c.assign(neurons * neurons, 0);
  }
  ModelScore s;
  const std::uint64_t all_pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  auto tally = [&](std::size_t a, std::size_t b, bool is_link) {
    const auto d = distances.distance(members[a], members[b]);
    grow(pairs_d, d);
    grow(links_d, d);
    ++pairs_d[d];
    if (is_link) ++links_d[d];
    if (with_clusters) {
      const auto c = cell(a, b);
      ++pairs_c[c];
      if (is_link) ++links_c[c];
    }
  };
  if (all_pairs <= options.max_exhaustive_pairs) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) tally(a, b, false);
    }
    for (auto key : linked) {
      const auto a = static_cast<std::size_t>(key >> 32);
      const auto b = static_cast<std::size_t>(key & 0xffffffffULL);
      const auto d = distances.distance(members[a], members[b]);
      ++links_d[d];
      if (with_clusters) ++links_c[cell(a, b)];
    }
    s.n_pairs = all_pairs;
    s.n_links = linked.size();
  } else {
    Rng rng(options.seed);
    for (std::uint64_t t = 0; t < options.sample_pairs; ++t) {
      const auto a = static_cast<std::size_t>(rng.below(n));
      auto b = static_cast<std::size_t>(rng.below(n - 1));
      if (b >= a) ++b;
      const bool is_link = linked.count(pair_key(a, b)) > 0;
      tally(a, b, is_link);
      s.n_links += is_link ? 1 : 0;
    }
    s.n_pairs = options.sample_pairs;
    s.sampled = true;
  }
  s.degenerate = s.n_links == 0 || s.n_links == s.n_pairs;

  s.ell_d = bernoulli_log_likelihood(pairs_d, links_d);
  s.k_d = static_cast<std::size_t>(std::count_if(pairs_d.begin(), pairs_d.end(), [](auto c) { return c > 0; }));
  double ell = s.ell_d;
  s.k_parameters = s.k_d;
  if (with_clusters) {
    s.ell_c = bernoulli_log_likelihood(pairs_c, links_c);
    s.k_c = static_cast<std::size_t>(std::count_if(pairs_c.begin(), pairs_c.end(), [](auto c) { return c > 0; }));
    ell = *s.ell_c;
    s.k_parameters = *s.k_c;
  }
  const double k = static_cast<double>(s.k_parameters);
  s.aic = 2.0 * k - 2.0 * ell;
  s.bic = k * std::log(static_cast<double>(s.n_pairs)) - 2.0 * ell;
  return s;
}

}  // namespace homophily
