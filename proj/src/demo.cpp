#include "homophily/demo.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "homophily/error.hpp"
#include "homophily/features.hpp"
#include "homophily/graph.hpp"
#include "homophily/random.hpp"
#include "homophily/synthetic.hpp"
#include "homophily/textmine.hpp"

namespace homophily::demo {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct LayerSpec {
  Layer layer;
  double out_degree;
  double scale;
};

constexpr LayerSpec kLayers[] = {
    {Layer::following, 8.0, 1.2}, {Layer::starring, 6.0, 1.6}, {Layer::forking, 2.0, 1.2},
    {Layer::issues, 3.0, 1.4},    {Layer::pulls, 2.0, 1.0},    {Layer::comments, 5.0, 1.0},
};

std::string user_name(std::size_t i) {
  std::string digits = std::to_string(i + 1);
  return "dev" + std::string(digits.size() < 4 ? 4 - digits.size() : 0, '0') + digits;
}

double latent_distance(const Matrix& m, std::size_t a, std::size_t b) {
  double s = 0.0;
  for (std::size_t j = 0; j < m.cols(); ++j) s += (m(a, j) - m(b, j)) * (m(a, j) - m(b, j));
  return std::sqrt(s);
}

double count_like(Rng& rng, double log_mean, double sd) {
  return std::floor(std::exp(log_mean + sd * rng.normal()));
}

template <class T>
const T& pick(Rng& rng, const std::vector<T>& items) {
  return items[static_cast<std::size_t>(rng.below(items.size()))];
}

void write_edges(const fs::path& path, const Network& g, const std::vector<std::string>& users) {
  std::ofstream out(path, std::ios::binary);
  out << "src,dst\n";
  for (const auto& e : g.edges()) out << users[e.src] << ',' << users[e.dst] << '\n';
  if (!out) throw Error("cannot write " + path.string());
}

// Sentence pools. Closeness g in [0, 1] (0 similar, 1 distant) tilts the
// pools: merge/code talk for close users, bug reports and help requests for
// distant ones, sentiment drifting negative with distance.
struct Pools {
  std::vector<std::string> merge = {
      "Merged into master, thanks.", "Can you merge this pull request when ready?",
      "Ready to merge after the rebase.", "I will merge it tonight.", "Merge conflicts are resolved now.",
  };
  std::vector<std::string> code = {
      "Calling `parse_args()` twice returns None.", "Try this:\n```\nmake clean && make\n```",
      "The fix is `x = x or default` in the loader.", "Wrapped the call in `try:` like the others.",
  };
  std::vector<std::string> patch = {"Here is a patch for the loader.", "The patch applies cleanly on develop."};
  std::vector<std::string> error = {
      "I get an error when I run the installer.", "The error message says file not found.",
      "Same error on Windows with the latest release.", "This throws an error on startup.",
  };
  std::vector<std::string> problem = {
      "Same problem here.", "The problem persists after updating.", "Is this a known problem?",
  };
  std::vector<std::string> help = {
      "Can someone help me with this?", "How to configure the plugin for a proxy?",
      "Any help is appreciated.", "I don't know how to reproduce it.",
  };
  std::vector<std::string> positive = {
      "Great work, thanks!", "Looks good to me.", "Nice fix, this is awesome.",
      "Thanks for the quick review!", "Perfect, works like a charm.", "Love this feature.",
  };
  std::vector<std::string> negative = {
      "This is broken and the build fails.", "Bad idea, it doesn't work.", "I hate this regression.",
      "This is wrong and crashes every time.", "Still broken for me.", "It can't work like this.",
  };
  std::vector<std::string> neutral = {
      "I updated the docs.", "See the attached log.", "The test runs on Linux.",
      "Version 2.3 changes the config format.", "Checked on the staging branch.",
  };
  std::vector<std::string> automated = {
      "Coverage increased (+0.3%) to 87.1% when pulling abc123 on feature.",
      "This issue has been automatically marked as stale because it has not had recent activity.",
      "Build succeeded for commit 4f2a9c1.",
  };
  std::vector<std::string> links = {
      "https://github.com/example/tool/issues/42", "https://stackoverflow.com/questions/1234/how-to",
      "https://twitter.com/example/status/99",
  };
  std::vector<std::string> decorations = {
      "\xF0\x9F\x91\x8D", "\xF0\x9F\x8E\x89", ":)", ":(", "lol", "\xF0\x9F\x98\x95", "\xF0\x9F\x9A\x80",
  };
};

std::string compose(Rng& rng, const Pools& p, double g, const std::string& owner,
                    const std::vector<std::string>& users) {
  if (rng.bernoulli(0.02)) return pick(rng, p.automated);
  std::vector<std::string> parts;
  const auto sentences = 1 + rng.below(3);
  for (std::uint64_t s = 0; s < sentences; ++s) {
    const double u = rng.uniform();
    const double w_merge = 0.20 * (1.0 - g) + 0.03;
    const double w_code = 0.16 * (1.0 - g) + 0.04;
    const double w_patch = 0.04;
    const double w_error = 0.04 + 0.16 * g;
    const double w_problem = 0.03 + 0.10 * g;
    const double w_help = 0.03 + 0.12 * g;
    double acc = 0.0;
    if (u < (acc += w_merge)) {
      parts.push_back(pick(rng, p.merge));
    } else if (u < (acc += w_code)) {
      parts.push_back(pick(rng, p.code));
    } else if (u < (acc += w_patch)) {
      parts.push_back(pick(rng, p.patch));
    } else if (u < (acc += w_error)) {
      parts.push_back(pick(rng, p.error));
    } else if (u < (acc += w_problem)) {
      parts.push_back(pick(rng, p.problem));
    } else if (u < (acc += w_help)) {
      parts.push_back(pick(rng, p.help));
    } else {
      const double v = rng.uniform();
      const double pos = 0.55 - 0.35 * g;
      const double neg = 0.10 + 0.35 * g;
      if (v < pos) {
        parts.push_back(pick(rng, p.positive));
      } else if (v < pos + neg) {
        parts.push_back(pick(rng, p.negative));
      } else {
        parts.push_back(pick(rng, p.neutral));
      }
    }
  }
  if (rng.bernoulli(0.12 * (1.0 - g) + 0.03)) parts.insert(parts.begin(), "@" + pick(rng, users));
  if (rng.bernoulli(0.05)) parts.push_back("See " + pick(rng, p.links));
  if (rng.bernoulli(0.04)) parts.push_back("Related to " + owner + "/toolkit.");
  if (rng.bernoulli(0.10)) parts.push_back(pick(rng, p.decorations));
  std::string text;
  for (const auto& part : parts) {
    if (!text.empty()) text += ' ';
    text += part;
  }
  return text;
}

}  // namespace

const std::string& demo_lexicon_text() {
  static const std::string text =
      "# demo sentiment lexicon: term<TAB>weight in [-1, 1]\n"
      "good\t0.6\ngreat\t0.8\nawesome\t0.9\nnice\t0.6\nthanks\t0.5\nthank\t0.5\nlove\t0.8\n"
      "perfect\t0.9\nexcellent\t0.9\nhelpful\t0.6\nappreciated\t0.5\nclean\t0.3\nworks\t0.4\n"
      "work\t0.3\ncharm\t0.4\nhappy\t0.7\nbroken\t-0.7\nbad\t-0.7\nwrong\t-0.6\nfails\t-0.6\n"
      "fail\t-0.6\nfailed\t-0.6\nhate\t-0.9\nregression\t-0.4\ncrashes\t-0.8\ncrash\t-0.8\n"
      "error\t-0.3\nproblem\t-0.3\nannoying\t-0.6\nstale\t-0.2\nugly\t-0.6\n";
  return text;
}

std::vector<std::string> demo_keywords() {
  return {"[code-snippet]", "merge", "patch", "error", "problem", "not-work", "help", "reproduce",
          "not-know", "[user-mention]"};
}

DemoFiles write_demo_dataset(const std::string& dir, const DemoOptions& o) {
  if (o.users < 10) throw InvalidArgument("demo dataset needs at least 10 users");
  const fs::path root(dir);
  fs::create_directories(root / "layers");
  DemoFiles files;

  std::vector<std::string> users(o.users);
  for (std::size_t i = 0; i < o.users; ++i) users[i] = user_name(i);

  const auto latent = synthetic::gaussian_clusters(o.users, 4, 3, 2.0, 1.0, derive_seed(o.seed, 1, 0));
  std::vector<Network> layers;
  std::size_t index = 0;
  for (const auto& spec : kLayers) {
    auto g = synthetic::planted_homophily(latent.points, spec.out_degree, spec.scale,
                                          derive_seed(o.seed, 2, index++));
    const auto path = root / "layers" / (std::string(to_string(spec.layer)) + ".csv");
    write_edges(path, g, users);
    files.written.push_back(path.string());
    layers.push_back(std::move(g));
  }

  // Features: degree-based columns from the layers, the rest drawn around
  // the latent position so the table carries the same structure.
  const auto deg = [&](Layer l) { return degrees(layers[static_cast<std::size_t>(l)]); };
  const auto following = deg(Layer::following), starring = deg(Layer::starring), forking = deg(Layer::forking),
             issues = deg(Layer::issues), pulls = deg(Layer::pulls), comments = deg(Layer::comments);
  const auto centrality = eigenvector_centrality(layers[static_cast<std::size_t>(Layer::following)]);
  Rng rng(derive_seed(o.seed, 3, 0));
  std::vector<UserFeatureTable::Row> rows(o.users);
  for (std::size_t i = 0; i < o.users; ++i) {
    const double a = latent.points(i, 0), b = latent.points(i, 1), c = latent.points(i, 2);
    auto& r = rows[i];
    auto set = [&](Feature f, double v) { r[static_cast<std::size_t>(f)] = v; };
    set(Feature::followers, following.in[i]);
    set(Feature::stars_obtained, starring.in[i] + count_like(rng, 1.0 + 0.4 * a, 0.8));
    set(Feature::eigenvector_centrality, centrality[i]);
    set(Feature::forked_by, forking.in[i]);
    set(Feature::followed, following.out[i]);
    set(Feature::forks_made, forking.out[i]);
    set(Feature::stars_given, starring.out[i] + count_like(rng, 0.5 + 0.3 * b, 0.8));
    set(Feature::commits_to_others, 3.0 * pulls.out[i] + count_like(rng, 0.8 + 0.3 * c, 0.7));
    set(Feature::comments_written, 2.0 * comments.out[i] + count_like(rng, 1.0 + 0.4 * b, 0.6));
    set(Feature::issues_opened, issues.out[i] + count_like(rng, 0.3 + 0.3 * a, 0.6));
    set(Feature::language_count, 1.0 + static_cast<double>(rng.below(3)) + (c > 0 ? 2.0 : 0.0));
    const double ew = std::exp(a), ef = std::exp(b), es = std::exp(c), other = std::exp(rng.normal());
    const double total = ew + ef + es + other;
    set(Feature::spec_web, ew / total);
    set(Feature::spec_functional, ef / total);
    set(Feature::spec_scientific, es / total);
    set(Feature::repository_count, 1.0 + count_like(rng, 1.5 + 0.4 * c, 0.6));
    set(Feature::registration_year, 2008.0 + static_cast<double>(rng.below(7)));
    // About 5% of accounts stay below the activity threshold.
    const bool idle = rng.bernoulli(0.05);
    set(Feature::commits_base, idle ? 0.0 : count_like(rng, 2.5 + 0.5 * a - 0.3 * b, 0.7));
    set(Feature::commits_forked, idle ? 0.0 : count_like(rng, 1.0 + 0.4 * b, 0.8));
    if (idle) {
      set(Feature::comments_written, std::min(r[static_cast<std::size_t>(Feature::comments_written)], 2.0));
      set(Feature::issues_opened, 0.0);
      set(Feature::commits_to_others, 0.0);
    }
  }
  {
    const auto path = root / "features.csv";
    std::ofstream out(path, std::ios::binary);
    write_feature_table(out, UserFeatureTable(users, rows));
    files.written.push_back(path.string());
  }

  // Corpus: artifacts along comment, issue and pull-request edges, plus a
  // few self-comments that the analysis drops.
  {
    const Pools pools;
    Rng trng(derive_seed(o.seed, 4, 0));
    const Network* sources[] = {&layers[static_cast<std::size_t>(Layer::comments)],
                                &layers[static_cast<std::size_t>(Layer::issues)],
                                &layers[static_cast<std::size_t>(Layer::pulls)]};
    std::vector<text::CommentArtifact> corpus;
    corpus.reserve(o.comments);
    for (std::size_t k = 0; k < o.comments; ++k) {
      const double u = trng.uniform();
      const std::size_t s = u < 0.5 ? 0 : u < 0.8 ? 1 : 2;
      const auto edges = sources[s]->edges();
      std::size_t author, owner;
      if (trng.bernoulli(0.05) || edges.empty()) {
        author = owner = static_cast<std::size_t>(trng.below(o.users));
      } else {
        const auto& e = edges[static_cast<std::size_t>(trng.below(edges.size()))];
        author = e.src;
        owner = e.dst;
      }
      const double g = std::min(1.0, latent_distance(latent.points, author, owner) / 7.0);
      text::CommentArtifact a;
      a.author = users[author];
      a.owner = users[owner];
      a.kind = s != 0 && trng.bernoulli(0.4) ? text::ArtifactKind::body : text::ArtifactKind::comment;
      a.text = compose(trng, pools, g, users[owner], users);
      corpus.push_back(std::move(a));
    }
    const auto path = root / "corpus.jsonl";
    std::ofstream out(path, std::ios::binary);
    text::write_corpus(out, corpus);
    files.written.push_back(path.string());
  }

  {
    const auto path = root / "lexicon.tsv";
    std::ofstream out(path, std::ios::binary);
    out << demo_lexicon_text();
    files.written.push_back(path.string());
  }

  ordered_json cfg;
  cfg["seed"] = o.seed;
  cfg["workers"] = 1;
  cfg["output_dir"] = "report";
  ordered_json layer_paths = ordered_json::object();
  for (const auto& spec : kLayers) {
    const std::string name(to_string(spec.layer));
    layer_paths[name] = "layers/" + name + ".csv";
  }
  cfg["inputs"] = {{"layers", layer_paths},
                   {"features", "features.csv"},
                   {"corpus", "corpus.jsonl"},
                   {"lexicon", "lexicon.tsv"}};
  cfg["manifolds"] = {"klein", "torus:8x8"};
  cfg["features"] = {{"activity_threshold", 10}, {"shift", 5}};
  cfg["som"] = {{"runs", o.som_runs}, {"epochs", 10}};
  cfg["richclub"] = {{"mode", "total"}, {"n_random", 50}, {"swaps_per_edge", 10}};
  cfg["nulls"] = {{"n_sims", 100}, {"swaps_per_edge", 10}, {"alpha", 0.05}};
  cfg["text"] = {{"keywords", demo_keywords()}};
  const auto path = root / "pipeline.json";
  std::ofstream out(path, std::ios::binary);
  out << cfg.dump(2) << '\n';
  files.written.push_back(path.string());
  files.config = path.string();
  return files;
}

}  // namespace homophily::demo
