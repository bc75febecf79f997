#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "homophily/graph.hpp"
#include "homophily/manifold.hpp"
#include "homophily/matrix.hpp"
#include "homophily/nullmodel.hpp"
#include "homophily/stats.hpp"

namespace homophily {

inline constexpr std::int32_t kUnassigned = -1;

/// Integer similarity distance between users, indexed by user position.
class PairDistance {
 public:
  virtual ~PairDistance() = default;
  virtual std::size_t user_count() const = 0;
  virtual const std::vector<std::string>& users() const = 0;
  virtual bool assigned(std::size_t user) const = 0;
  virtual std::uint32_t distance(std::size_t u, std::size_t v) const = 0;
};

/// Mean of per-run manifold distances, rounded half away from zero.
std::uint32_t pair_distance(std::span<const std::uint32_t> runs_u, std::span<const std::uint32_t> runs_v,
                            const Manifold& manifold);

// Per-user neuron assignment in each of R SOM runs. A user is assigned only
// if every run placed it.
class DistanceAssignment final : public PairDistance {
 public:
  /// runs[r][u] is the neuron of user u in run r, or kUnassigned.
  DistanceAssignment(std::shared_ptr<const Manifold> manifold, std::vector<std::string> users,
                     std::vector<std::vector<std::int32_t>> runs);

  std::size_t user_count() const override { return users_.size(); }
  const std::vector<std::string>& users() const override { return users_; }
  bool assigned(std::size_t user) const override { return assigned_[user]; }
  std::uint32_t distance(std::size_t u, std::size_t v) const override;

  std::size_t run_count() const noexcept { return run_count_; }
  const Manifold& manifold() const noexcept { return *manifold_; }
  /// Neuron of `user` in run `run` (kUnassigned if absent).
  std::int32_t neuron(std::size_t run, std::size_t user) const;

 private:
  std::shared_ptr<const Manifold> manifold_;
  std::vector<std::string> users_;
  std::size_t run_count_;
  // user-major: neurons_[u * run_count_ + r]
  std::vector<std::uint32_t> neurons_;
  std::vector<bool> assigned_;
};

// Naive baseline: Euclidean distance in feature space grouped into
// equal-frequency buckets. Bucket edges are cut between distinct sampled
// distance values so that every bucket holds at least one of them.
class EuclideanBuckets final : public PairDistance {
 public:
  EuclideanBuckets(Matrix data, std::vector<std::string> users, std::vector<double> upper_bounds);

  std::size_t user_count() const override { return users_.size(); }
  const std::vector<std::string>& users() const override { return users_; }
  bool assigned(std::size_t) const override { return true; }
  std::uint32_t distance(std::size_t u, std::size_t v) const override;

  /// Bucket b holds distances in (upper_bounds[b-1], upper_bounds[b]]; the last is open.
  const std::vector<double>& upper_bounds() const noexcept { return upper_bounds_; }
  std::uint32_t bucket_of(double euclidean) const;

 private:
  Matrix data_;
  std::vector<std::string> users_;
  std::vector<double> upper_bounds_;
};

/// Dense copy of another distance for repeated lookups (n(n-1)/2 entries).
class CachedDistance final : public PairDistance {
 public:
  explicit CachedDistance(const PairDistance& source, unsigned workers = 1);

  std::size_t user_count() const override { return users_.size(); }
  const std::vector<std::string>& users() const override { return users_; }
  bool assigned(std::size_t user) const override { return assigned_[user]; }
  std::uint32_t distance(std::size_t u, std::size_t v) const override;

 private:
  std::vector<std::string> users_;
  std::vector<bool> assigned_;
  std::vector<std::uint16_t> upper_;
};

/// Samples `sample_size` row pairs (all pairs when there are fewer) and
/// derives n_buckets equal-frequency buckets. Identical rows collapse to a
/// single bucket 0; otherwise fewer distinct distances than buckets is an
/// InvalidArgument.
EuclideanBuckets naive_euclidean_baseline(const Matrix& data, std::vector<std::string> users,
                                          std::size_t n_buckets, std::size_t sample_size,
                                          std::uint64_t seed);

/// user index per network node (-1 when the node has no user). Matches by
/// label when the network carries labels, otherwise by position.
std::vector<std::int64_t> align_nodes(const Network& network, const PairDistance& distances);

struct LinkDistanceHistogram {
  Layer layer = Layer::other;
  std::map<std::uint32_t, std::uint64_t> counts;
  std::uint64_t total_edges = 0;
  std::uint64_t unassigned_edges = 0;
};

LinkDistanceHistogram link_distance_distribution(const Network& network, const PairDistance& distances);

/// One distance value per edge with both endpoints assigned, in edge order.
std::vector<double> edge_distance_sample(const Network& network, const PairDistance& distances);

struct NullSimulation {
  LinkDistanceHistogram histogram;
  stats::KsResult ks;
  SwapTrace trace;
};

struct NullComparison {
  LinkDistanceHistogram empirical;
  std::vector<NullSimulation> simulations;
  double alpha = 0.05;
  /// Share of simulations whose KS p-value is below alpha.
  double rejection_fraction = 0.0;
};

struct NullComparisonOptions {
  std::size_t n_sims = 100;
  double swaps_per_edge = 10.0;
  std::uint64_t seed = 1;
  double alpha = 0.05;
  unsigned workers = 1;
};

/// Throws InvalidArgument "no edges to compare" when no edge has both
/// endpoints assigned.
NullComparison null_distribution_comparison(const Network& network, const PairDistance& distances,
                                            const NullComparisonOptions& options = {});

// Per-level Bernoulli link model over unordered user pairs. A pair is linked
// when an edge joins it in either direction. ell_d groups pairs by distance
// value, ell_c (when cluster assignments are given) by unordered neuron pair.
// AIC and BIC use the clustering likelihood when available and the distance
// likelihood otherwise.
struct ModelScore {
  double ell_d = 0.0;
  std::size_t k_d = 0;
  std::optional<double> ell_c;
  std::optional<std::size_t> k_c;
  std::size_t k_parameters = 0;
  double aic = 0.0;
  double bic = 0.0;
  std::uint64_t n_pairs = 0;
  std::uint64_t n_links = 0;
  bool sampled = false;
  /// All pairs linked or none: likelihood is 0 and uninformative.
  bool degenerate = false;
};

struct ScoreOptions {
  std::uint64_t max_exhaustive_pairs = 10'000'000;
  std::uint64_t sample_pairs = 1'000'000;
  std::uint64_t seed = 1;
};

/// Log-likelihood sum over cells of links*ln(p) + (pairs-links)*ln(1-p),
/// p = links / pairs, with 0 ln 0 = 0.
double bernoulli_log_likelihood(std::span<const std::uint64_t> pairs, std::span<const std::uint64_t> links);

/// clusters[u] is the neuron of user u (kUnassigned allowed), indexed like
/// `distances`. Throws InvalidArgument when fewer than 2 users are assigned.
ModelScore score_model(const Network& network, const PairDistance& distances,
                       std::span<const std::int32_t> clusters = {}, const ScoreOptions& options = {});

}  // namespace homophily
