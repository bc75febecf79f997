#include "homophily/som.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "homophily/error.hpp"
#include "homophily/random.hpp"

namespace homophily {

namespace {

constexpr int kModelFormatVersion = 1;

std::uint64_t column_hash(const Matrix& data, std::size_t col) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t r = 0; r < data.rows(); ++r) {
    h ^= std::bit_cast<std::uint64_t>(data(r, col));
    h *= 0x100000001b3ULL;
  }
  return h;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

void check_dim(std::size_t expected, std::size_t got) {
  if (expected != got) {
    throw InvalidArgument("dimension mismatch: model has " + std::to_string(expected) +
                          " features, input has " + std::to_string(got));
  }
}

const char* kind_name(ManifoldKind k) {
  switch (k) {
    case ManifoldKind::grid: return "grid";
    case ManifoldKind::torus: return "torus";
    case ManifoldKind::file: break;
  }
  return "file";
}

ManifoldKind parse_kind(const std::string& s) {
  if (s == "grid") return ManifoldKind::grid;
  if (s == "torus") return ManifoldKind::torus;
  return ManifoldKind::file;
}

}  // namespace

void TrainConfig::validate() const {
  if (!(alpha_start <= 1.0 && alpha_start >= alpha_end && alpha_end > 0.0)) {
    throw InvalidArgument("learning rate schedule must satisfy 1 >= alpha_start >= alpha_end > 0");
  }
  if (!(sigma_start >= sigma_end && sigma_end > 0.0)) {
    throw InvalidArgument("neighbourhood schedule must satisfy sigma_start >= sigma_end > 0");
  }
}

SomModel::SomModel(std::shared_ptr<const Manifold> manifold, Matrix codebook, TrainConfig config,
                   std::uint64_t seed)
    : manifold_(std::move(manifold)), codebook_(std::move(codebook)), config_(config), seed_(seed) {
  if (!manifold_) throw InvalidArgument("SOM model needs a manifold");
  if (codebook_.rows() != manifold_->neuron_count()) {
    throw InvalidArgument("codebook rows do not match the manifold's neuron count");
  }
}

Matrix initial_codebook(const Matrix& data, std::size_t neuron_count, std::uint64_t seed) {
  Matrix codebook(neuron_count, data.cols());
  for (std::size_t c = 0; c < data.cols(); ++c) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t r = 0; r < data.rows(); ++r) {
      lo = std::min(lo, data(r, c));
      hi = std::max(hi, data(r, c));
    }
    Rng rng(derive_seed(seed, column_hash(data, c), 0));
    for (std::size_t n = 0; n < neuron_count; ++n) codebook(n, c) = rng.uniform(lo, hi);
  }
  return codebook;
}

SomModel train_som(const Matrix& data, std::shared_ptr<const Manifold> manifold,
                   const TrainConfig& config, std::uint64_t seed, const EpochCallback& on_epoch) {
  if (!manifold) throw InvalidArgument("train_som needs a manifold");
  if (data.empty()) throw InvalidArgument("train_som needs at least one sample");
  if (data.cols() == 0) throw InvalidArgument("train_som needs at least one feature");
  config.validate();
  const auto& mf = *manifold;
  const auto neurons = mf.neuron_count();
  const auto dim = data.cols();
  Matrix codebook = initial_codebook(data, neurons, seed);

  const double total = static_cast<double>(config.epochs) * static_cast<double>(data.rows());
  std::vector<std::size_t> order(data.rows());
  std::vector<double> kernel(mf.diameter() + 1);
  Rng rng(derive_seed(seed, 0x534f4d, 1));
  std::size_t step = 0;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(std::span<std::size_t>(order));
    for (auto r : order) {
      const double frac = total > 1.0 ? static_cast<double>(step) / (total - 1.0) : 0.0;
      const double alpha = config.alpha_start + (config.alpha_end - config.alpha_start) * frac;
      const double sigma = config.sigma_start + (config.sigma_end - config.sigma_start) * frac;
      const double inv = 1.0 / (2.0 * sigma * sigma);
      for (std::size_t d = 0; d < kernel.size(); ++d) {
        kernel[d] = alpha * std::exp(-static_cast<double>(d * d) * inv);
      }
      const auto x = data.row(r);
      const auto bmu = best_matching_unit(codebook, x);
      for (std::uint32_t n = 0; n < neurons; ++n) {
        const double h = kernel[mf.distance(bmu, n)];
        auto w = codebook.row(n);
        for (std::size_t c = 0; c < dim; ++c) w[c] += h * (x[c] - w[c]);
      }
      ++step;
    }
    if (on_epoch) on_epoch(epoch, codebook);
  }
  return SomModel(std::move(manifold), std::move(codebook), config, seed);
}

std::uint32_t best_matching_unit(const Matrix& codebook, std::span<const double> x) {
  check_dim(codebook.cols(), x.size());
  std::uint32_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < codebook.rows(); ++n) {
    const double d = squared_distance(codebook.row(n), x);
    if (d < best_d) {
      best_d = d;
      best = static_cast<std::uint32_t>(n);
    }
  }
  return best;
}

std::uint32_t best_matching_unit(const SomModel& model, std::span<const double> x) {
  return best_matching_unit(model.codebook(), x);
}

PopulationMap map_population(const SomModel& model, const Matrix& data) {
  PopulationMap out;
  out.occupancy.assign(model.manifold().neuron_count(), 0);
  if (data.empty()) return out;
  check_dim(model.feature_dim(), data.cols());
  out.assignment.resize(data.rows());
  for (std::size_t r = 0; r < data.rows(); ++r) {
    out.assignment[r] = best_matching_unit(model, data.row(r));
    ++out.occupancy[out.assignment[r]];
  }
  return out;
}

double quantization_error(const Matrix& codebook, const Matrix& data) {
  if (data.empty()) throw InvalidArgument("quantization error of empty data");
  check_dim(codebook.cols(), data.cols());
  double sum = 0.0;
  for (std::size_t r = 0; r < data.rows(); ++r) {
    const auto bmu = best_matching_unit(codebook, data.row(r));
    sum += std::sqrt(squared_distance(codebook.row(bmu), data.row(r)));
  }
  return sum / static_cast<double>(data.rows());
}

double quantization_error(const SomModel& model, const Matrix& data) {
  return quantization_error(model.codebook(), data);
}

void save_model(std::ostream& out, const SomModel& model) {
  const auto& mf = model.manifold();
  nlohmann::json j;
  j["format"] = "homophily-som";
  j["version"] = kModelFormatVersion;
  j["manifold"] = {{"name", mf.name()},
                   {"kind", kind_name(mf.kind())},
                   {"neuron_count", mf.neuron_count()},
                   {"edges", mf.edges()}};
  j["seed"] = model.seed();
  const auto& c = model.config();
  j["config"] = {{"epochs", c.epochs},
                 {"alpha_start", c.alpha_start},
                 {"alpha_end", c.alpha_end},
                 {"sigma_start", c.sigma_start},
                 {"sigma_end", c.sigma_end}};
  j["feature_dim"] = model.feature_dim();
  auto rows = nlohmann::json::array();
  for (std::size_t n = 0; n < model.codebook().rows(); ++n) {
    const auto r = model.codebook().row(n);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  j["codebook"] = std::move(rows);
  out << j.dump(1) << "\n";
}

SomModel load_model(std::istream& in) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("SOM model: ") + e.what(), 0);
  }
  try {
    if (j.at("format") != "homophily-som") throw ParseError("not a SOM model document", 0);
    if (j.at("version").get<int>() != kModelFormatVersion) {
      throw ParseError("unsupported SOM model version", 0);
    }
    const auto& m = j.at("manifold");
    auto manifold = std::make_shared<const Manifold>(
        m.at("name").get<std::string>(), parse_kind(m.at("kind").get<std::string>()),
        m.at("neuron_count").get<std::size_t>(),
        m.at("edges").get<std::vector<std::pair<std::uint32_t, std::uint32_t>>>());
    TrainConfig c;
    const auto& jc = j.at("config");
    c.epochs = jc.at("epochs").get<std::size_t>();
    c.alpha_start = jc.at("alpha_start").get<double>();
    c.alpha_end = jc.at("alpha_end").get<double>();
    c.sigma_start = jc.at("sigma_start").get<double>();
    c.sigma_end = jc.at("sigma_end").get<double>();
    const auto dim = j.at("feature_dim").get<std::size_t>();
    const auto& rows = j.at("codebook");
    Matrix codebook(rows.size(), dim);
    for (std::size_t n = 0; n < rows.size(); ++n) {
      const auto row = rows[n].get<std::vector<double>>();
      if (row.size() != dim) throw ParseError("codebook row has the wrong width", 0);
      std::copy(row.begin(), row.end(), codebook.row(n).begin());
    }
    return SomModel(std::move(manifold), std::move(codebook), c, j.at("seed").get<std::uint64_t>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("SOM model: ") + e.what(), 0);
  }
}

}  // namespace homophily
