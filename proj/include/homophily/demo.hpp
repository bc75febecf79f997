#pragma once

#include <cstdint>
#include <string>
#include <vector>

// Deterministic synthetic dataset shaped like the real inputs: six
// interaction layers, a user feature table, a comment corpus, a sentiment
// lexicon and a pipeline config tying them together.
namespace homophily::demo {

struct DemoOptions {
  std::size_t users = 2000;
  std::size_t comments = 10000;
  std::size_t som_runs = 20;
  std::uint64_t seed = 1;
};

struct DemoFiles {
  std::string config;
  std::vector<std::string> written;
};

/// Writes the dataset into `dir` (created if missing) and returns the
/// pipeline config path. Same options give byte-identical files.
DemoFiles write_demo_dataset(const std::string& dir, const DemoOptions& options = {});

/// The small bundled lexicon, "term<TAB>weight" lines.
const std::string& demo_lexicon_text();

/// Keywords tracked by the demo report.
std::vector<std::string> demo_keywords();

}  // namespace homophily::demo
