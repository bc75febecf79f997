#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "homophily/graph.hpp"
#include "homophily/som.hpp"

namespace homophily::pipeline {

enum class Stage { ingest, assort, richclub, som, distances, nulls, text };

std::string_view to_string(Stage stage);
/// Accepts stage names and the CLI spelling "som-train". Throws InvalidArgument.
Stage parse_stage(std::string_view name);
const std::vector<Stage>& all_stages();

/// Process exit status when `stage` fails: 10 + its position in all_stages().
int exit_code(Stage stage);
inline constexpr int kConfigError = 2;

struct SomSettings {
  std::size_t runs = 200;
  TrainConfig train;
};

struct RichClubSettings {
  DegreeMode mode = DegreeMode::total;
  bool directed = true;
  bool undirected = true;
  std::size_t n_random = 50;
  double swaps_per_edge = 10.0;
};

struct NullSettings {
  std::size_t n_sims = 100;
  double swaps_per_edge = 10.0;
  double alpha = 0.05;
};

struct ModelSettings {
  /// 0: one bucket per distance level of the first manifold.
  std::size_t baseline_buckets = 0;
  std::size_t baseline_sample = 100000;
  std::uint64_t max_exhaustive_pairs = 10'000'000;
  std::uint64_t sample_pairs = 1'000'000;
};

struct PipelineConfig {
  /// Relative input and output paths resolve against this directory.
  std::filesystem::path base_dir = ".";
  std::uint64_t seed = 1;
  /// 0 means all available cores.
  unsigned workers = 0;
  std::string output_dir = "report";

  std::vector<std::pair<Layer, std::string>> layers;
  std::optional<std::string> features;
  std::optional<std::string> accounts;
  std::optional<std::string> corpus;
  std::optional<std::string> lexicon;
  /// build_manifold specs; "file:" paths are relative to base_dir.
  std::vector<std::string> manifolds = {"klein"};

  double activity_threshold = 10.0;
  double shift = 5.0;
  SomSettings som;
  RichClubSettings richclub;
  NullSettings nulls;
  ModelSettings models;
  std::vector<std::string> keywords;

  /// Empty selects every stage.
  std::set<Stage> stages;

  std::filesystem::path resolve(const std::string& path) const;
  /// Throws InvalidArgument when a referenced file is missing or a setting is out of range.
  void validate() const;
};

/// JSON config. Unknown keys are rejected. Relative paths are taken
/// relative to `base_dir`.
PipelineConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir);
PipelineConfig load_config(const std::string& path);

enum class StageStatus { ok, skipped, not_selected, failed, not_run };
std::string_view to_string(StageStatus status);

struct StageReport {
  Stage stage;
  StageStatus status = StageStatus::not_run;
  std::string message;
  std::vector<std::string> outputs;
};

struct PipelineResult {
  int exit_code = 0;
  std::vector<StageReport> stages;
  std::filesystem::path output_dir;
};

/// Runs the selected stages in order and writes their outputs plus
/// manifest.json into the output directory. Upstream results a selected
/// stage needs (SOM ensembles for distances, say) are computed in memory
/// without being written. Progress lines go to `log` when given.
PipelineResult run_pipeline(const PipelineConfig& config, std::ostream* log = nullptr);

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace homophily::pipeline
