#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "homophily/manifold.hpp"
#include "homophily/matrix.hpp"

namespace homophily {

// Online SOM schedule. alpha and sigma decay linearly from start to end over
// all epochs * rows presentations; sigma is measured in manifold hops.
struct TrainConfig {
  std::size_t epochs = 50;
  double alpha_start = 0.5;
  double alpha_end = 0.01;
  double sigma_start = 3.0;
  double sigma_end = 0.5;

  /// Throws InvalidArgument unless 1 >= alpha_start >= alpha_end > 0 and
  /// sigma_start >= sigma_end > 0.
  void validate() const;
};

class SomModel {
 public:
  SomModel(std::shared_ptr<const Manifold> manifold, Matrix codebook, TrainConfig config,
           std::uint64_t seed);

  const Manifold& manifold() const noexcept { return *manifold_; }
  std::shared_ptr<const Manifold> manifold_ptr() const noexcept { return manifold_; }
  const Matrix& codebook() const noexcept { return codebook_; }
  std::size_t feature_dim() const noexcept { return codebook_.cols(); }
  const TrainConfig& config() const noexcept { return config_; }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::shared_ptr<const Manifold> manifold_;
  Matrix codebook_;
  TrainConfig config_;
  std::uint64_t seed_;
};

/// Called after each completed epoch (1-based) with the current codebook.
using EpochCallback = std::function<void(std::size_t epoch, const Matrix& codebook)>;

/// Codebook before any training: per neuron and feature a uniform draw in the
/// feature's observed [min, max]. The draw for a feature is seeded from the
/// column's content, so permuting data columns permutes the codebook.
Matrix initial_codebook(const Matrix& data, std::size_t neuron_count, std::uint64_t seed);

// Competition: the BMU is the neuron with the smallest Euclidean distance to
// the sample. Adaptation: every neuron n moves by
//   alpha(t) * exp(-d(bmu, n)^2 / (2 sigma(t)^2)) * (x - w_n).
// Samples are presented in a fresh seeded shuffle each epoch.
SomModel train_som(const Matrix& data, std::shared_ptr<const Manifold> manifold,
                   const TrainConfig& config, std::uint64_t seed, const EpochCallback& on_epoch = {});

/// Lowest-index neuron among those nearest to x.
std::uint32_t best_matching_unit(const SomModel& model, std::span<const double> x);
std::uint32_t best_matching_unit(const Matrix& codebook, std::span<const double> x);

struct PopulationMap {
  std::vector<std::uint32_t> assignment;
  std::vector<std::size_t> occupancy;
};

PopulationMap map_population(const SomModel& model, const Matrix& data);

/// Mean Euclidean distance from each row to its BMU codebook vector.
double quantization_error(const SomModel& model, const Matrix& data);
double quantization_error(const Matrix& codebook, const Matrix& data);

/// JSON document with manifold, seed, config and codebook.
void save_model(std::ostream& out, const SomModel& model);
SomModel load_model(std::istream& in);

}  // namespace homophily
