#include "homophily/pipeline.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <map>
#include <memory>
#include <sstream>

#include "homophily/assortativity.hpp"
#include "homophily/csv.hpp"
#include "homophily/error.hpp"
#include "homophily/features.hpp"
#include "homophily/manifold.hpp"
#include "homophily/parallel.hpp"
#include "homophily/random.hpp"
#include "homophily/richclub.hpp"
#include "homophily/simdist.hpp"
#include "homophily/stats.hpp"
#include "homophily/textmine.hpp"

namespace homophily::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr std::uint64_t kSomStream = 0x534f4d;
constexpr std::uint64_t kRichStream = 0x52494348;
constexpr std::uint64_t kNullStream = 0x4e554c4c;
constexpr std::uint64_t kBaselineStream = 0x42415345;
constexpr std::uint64_t kScoreStream = 0x53434f52;

const std::vector<std::pair<Stage, std::string_view>>& stage_names() {
  static const std::vector<std::pair<Stage, std::string_view>> names = {
      {Stage::ingest, "ingest"}, {Stage::assort, "assort"},   {Stage::richclub, "richclub"},
      {Stage::som, "som"},       {Stage::distances, "distances"}, {Stage::nulls, "nulls"},
      {Stage::text, "text"},
  };
  return names;
}

std::string fmt(double v) { return csv::format_double(v); }
std::string fmt(const std::optional<double>& v) { return v ? csv::format_double(*v) : std::string(); }

void check_keys(const json& obj, const std::string& where, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw InvalidArgument(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw InvalidArgument("unknown config key " + where + "." + key);
    }
  }
}

template <class T>
void read(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

void read_path(const json& obj, const char* key, std::optional<std::string>& out) {
  if (obj.contains(key) && !obj.at(key).is_null()) out = obj.at(key).get<std::string>();
}

// One stage's bookkeeping: every file opened through it is listed, so a
// failure part-way through leaves the partial outputs on record.
class StageOutput {
 public:
  StageOutput(const fs::path& dir, StageReport& report) : dir_(dir), report_(report) {}

  std::ofstream open(const std::string& name) {
    report_.outputs.push_back(name);
    std::ofstream out(dir_ / name, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + (dir_ / name).string());
    return out;
  }

 private:
  fs::path dir_;
  StageReport& report_;
};

struct Ensemble {
  std::shared_ptr<const Manifold> manifold;
  std::vector<std::vector<std::int32_t>> runs;
  std::vector<double> quantization;
  std::unique_ptr<DistanceAssignment> assignment;
  std::unique_ptr<CachedDistance> cache;
};

// Inputs and intermediate results, loaded or computed on first use.
class Context {
 public:
  Context(const PipelineConfig& c, std::ostream* log) : c_(c), log_(log) {
    workers_ = c.workers == 0 ? default_workers() : c.workers;
  }

  unsigned workers() const { return workers_; }
  bool has_layers() const { return !c_.layers.empty(); }
  bool has_features() const { return c_.features.has_value(); }

  void note(const std::string& line) {
    if (log_) *log_ << line << '\n';
  }

  const std::vector<Network>& layers() {
    if (!layers_) {
      std::vector<Network> out;
      for (const auto& [layer, path] : c_.layers) {
        EdgeListOptions o;
        o.layer = layer;
        out.push_back(load_edge_list_file(c_.resolve(path).string(), o));
      }
      layers_ = std::move(out);
    }
    return *layers_;
  }

  const UserFeatureTable& raw_features() {
    if (!raw_) {
      std::ifstream in(c_.resolve(*c_.features), std::ios::binary);
      if (!in) throw Error("cannot open feature table " + *c_.features);
      raw_ = load_feature_table(in);
    }
    return *raw_;
  }

  const UserFeatureTable& active_features() {
    if (!active_) active_ = filter_active_users(raw_features(), c_.activity_threshold);
    return *active_;
  }

  const TransformedMatrix& matrix() {
    if (!matrix_) matrix_ = transform_features(active_features(), c_.shift);
    return *matrix_;
  }

  std::vector<Ensemble>& ensembles() {
    if (ensembles_.empty()) {
      const auto& m = matrix();
      for (std::size_t mi = 0; mi < c_.manifolds.size(); ++mi) {
        auto spec = c_.manifolds[mi];
        if (spec.rfind("file:", 0) == 0) spec = "file:" + c_.resolve(spec.substr(5)).string();
        Ensemble e;
        e.manifold = std::make_shared<const Manifold>(build_manifold(spec));
        e.runs.resize(c_.som.runs);
        e.quantization.resize(c_.som.runs);
        note("som: " + e.manifold->name() + " x" + std::to_string(c_.som.runs));
        parallel_for(c_.som.runs, workers_, [&](std::size_t r) {
          const auto model = train_som(m.values, e.manifold, c_.som.train, derive_seed(c_.seed, kSomStream + mi, r));
          const auto pop = map_population(model, m.values);
          e.runs[r].assign(pop.assignment.begin(), pop.assignment.end());
          e.quantization[r] = quantization_error(model, m.values);
        });
        e.assignment = std::make_unique<DistanceAssignment>(e.manifold, m.row_labels, e.runs);
        e.cache = std::make_unique<CachedDistance>(*e.assignment, workers_);
        ensembles_.push_back(std::move(e));
      }
    }
    return ensembles_;
  }

 private:
  const PipelineConfig& c_;
  std::ostream* log_;
  unsigned workers_;
  std::optional<std::vector<Network>> layers_;
  std::optional<UserFeatureTable> raw_;
  std::optional<UserFeatureTable> active_;
  std::optional<TransformedMatrix> matrix_;
  std::vector<Ensemble> ensembles_;
};

void run_ingest(const PipelineConfig& c, Context& ctx, StageOutput& out) {
  auto summary = out.open("ingest_summary.csv");
  csv::write_row(summary, {"input", "rows", "nodes", "edges"});
  for (std::size_t i = 0; ctx.has_layers() && i < c.layers.size(); ++i) {
    const auto& g = ctx.layers()[i];
    csv::write_row(summary, {"layer:" + std::string(to_string(c.layers[i].first)), "",
                             std::to_string(g.node_count()), std::to_string(g.edge_count())});
  }
  if (ctx.has_features()) {
    csv::write_row(summary, {"features", std::to_string(ctx.raw_features().size()), "", ""});
    csv::write_row(summary, {"features:active", std::to_string(ctx.active_features().size()), "", ""});
    auto users = out.open("active_users.csv");
    csv::write_row(users, {"user"});
    for (const auto& u : ctx.active_features().users()) csv::write_row(users, {u});
  }
  if (c.accounts) {
    std::ifstream in(c.resolve(*c.accounts), std::ios::binary);
    if (!in) throw Error("cannot open account table " + *c.accounts);
    const auto records = load_account_records(in);
    const auto partition = unify_accounts(records);
    csv::write_row(summary, {"accounts", std::to_string(records.size()), std::to_string(partition.entity_count), ""});
    auto map = out.open("entity_map.csv");
    write_entity_map(map, records, partition);
  }
}

void run_assort(const PipelineConfig& c, Context& ctx, StageOutput& out) {
  auto f = out.open("assortativity.csv");
  csv::write_row(f, {"layer", "transform", "r_total", "rho_total", "r_in", "rho_in", "r_out", "rho_out", "edges"});
  for (std::size_t i = 0; i < c.layers.size(); ++i) {
    const auto& g = ctx.layers()[i];
    for (const bool log_shift : {false, true}) {
      std::vector<std::string> row = {std::string(to_string(c.layers[i].first)), log_shift ? "log" : "raw"};
      if (g.edge_count() < 2) {
        row.resize(8);
      } else {
        for (const auto& r : assortativity_table(g, log_shift)) row.push_back(fmt(r.value));
      }
      row.push_back(std::to_string(g.edge_count()));
      csv::write_row(f, row);
    }
  }
}

void run_richclub(const PipelineConfig& c, Context& ctx, StageOutput& out) {
  auto f = out.open("richclub.csv");
  csv::write_row(f, {"layer", "directed", "mode", "k", "club_nodes", "phi", "phi_random_mean", "rho", "ci_low",
                     "ci_high"});
  auto conv = out.open("richclub_convergence.csv");
  csv::write_row(conv, {"layer", "directed", "drift", "converged", "swaps_accepted", "swaps_attempted"});
  std::vector<bool> variants;
  if (c.richclub.directed) variants.push_back(true);
  if (c.richclub.undirected) variants.push_back(false);
  for (std::size_t i = 0; i < c.layers.size(); ++i) {
    const auto& g = ctx.layers()[i];
    const std::string layer(to_string(c.layers[i].first));
    for (const bool directed : variants) {
      NormalizeOptions o;
      o.n_random = c.richclub.n_random;
      o.swaps_per_edge = c.richclub.swaps_per_edge;
      o.seed = derive_seed(c.seed, kRichStream + (directed ? 1 : 0), i);
      o.workers = ctx.workers();
      ctx.note("richclub: " + layer + (directed ? " directed" : " undirected"));
      const auto curve = normalized_rich_club(g, c.richclub.mode, directed, o);
      const std::string mode = directed ? std::string(to_string(c.richclub.mode)) : "undirected";
      for (const auto& p : curve.points) {
        if (p.club_nodes < 2) continue;
        csv::write_row(f, {layer, directed ? "true" : "false", mode, std::to_string(p.k),
                           std::to_string(p.club_nodes), fmt(p.phi), fmt(p.phi_random_mean), fmt(p.rho),
                           fmt(p.ci_low), fmt(p.ci_high)});
      }
      std::uint64_t accepted = 0, attempted = 0;
      for (const auto& t : curve.traces) {
        accepted += t.accepted;
        attempted += t.attempted;
      }
      const auto sc = swap_convergence(g, c.richclub.mode, directed, o.seed, c.richclub.swaps_per_edge / 2.0,
                                       c.richclub.swaps_per_edge);
      csv::write_row(conv, {layer, directed ? "true" : "false", fmt(sc.drift), sc.converged ? "true" : "false",
                            std::to_string(accepted), std::to_string(attempted)});
    }
  }
}

void run_som(const PipelineConfig&, Context& ctx, StageOutput& out) {
  auto& ensembles = ctx.ensembles();
  const auto& users = ctx.matrix().row_labels;
  auto q = out.open("som_quality.csv");
  csv::write_row(q, {"manifold", "run", "quantization_error", "occupied_neurons"});
  for (const auto& e : ensembles) {
    const auto& name = e.manifold->name();
    auto f = out.open("som_" + name + ".csv");
    std::vector<std::string> header = {"user"};
    for (std::size_t r = 0; r < e.runs.size(); ++r) header.push_back("run" + std::to_string(r));
    csv::write_row(f, header);
    for (std::size_t u = 0; u < users.size(); ++u) {
      std::vector<std::string> row = {users[u]};
      for (const auto& run : e.runs) row.push_back(std::to_string(run[u]));
      csv::write_row(f, row);
    }
    for (std::size_t r = 0; r < e.runs.size(); ++r) {
      std::vector<bool> used(e.manifold->neuron_count(), false);
      for (auto n : e.runs[r]) used[static_cast<std::size_t>(n)] = true;
      csv::write_row(q, {name, std::to_string(r), fmt(e.quantization[r]),
                         std::to_string(std::count(used.begin(), used.end(), true))});
    }
  }
}

// Per-run edge shares at each distance, for the jackknife interval.
std::vector<std::vector<double>> per_run_shares(const Network& g, const Ensemble& e, std::size_t levels) {
  const auto user_of = align_nodes(g, *e.cache);
  std::vector<std::vector<double>> shares(e.runs.size(), std::vector<double>(levels, 0.0));
  std::size_t used = 0;
  for (const auto& edge : g.edges()) {
    const auto u = user_of[edge.src], v = user_of[edge.dst];
    if (u < 0 || v < 0) continue;
    ++used;
    for (std::size_t r = 0; r < e.runs.size(); ++r) {
      const auto d = e.manifold->distance(static_cast<std::uint32_t>(e.runs[r][static_cast<std::size_t>(u)]),
                                          static_cast<std::uint32_t>(e.runs[r][static_cast<std::size_t>(v)]));
      shares[r][d] += 1.0;
    }
  }
  if (used > 0) {
    for (auto& s : shares) {
      for (auto& x : s) x /= static_cast<double>(used);
    }
  }
  return shares;
}

void run_distances(const PipelineConfig& c, Context& ctx, StageOutput& out) {
  auto& ensembles = ctx.ensembles();
  const auto& layers = ctx.layers();
  auto h = out.open("link_distances.csv");
  csv::write_row(h, {"manifold", "layer", "distance", "count", "share", "run_share_mean", "ci_low", "ci_high"});
  auto s = out.open("model_scores.csv");
  csv::write_row(s, {"manifold", "layer", "ell_d", "k_d", "ell_c", "k_c", "aic", "bic", "n_pairs", "n_links",
                     "sampled", "degenerate"});
  ScoreOptions so;
  so.max_exhaustive_pairs = c.models.max_exhaustive_pairs;
  so.sample_pairs = c.models.sample_pairs;
  auto score_row = [&](const std::string& manifold, const std::string& layer, const ModelScore& m) {
    csv::write_row(s, {manifold, layer, fmt(m.ell_d), std::to_string(m.k_d), fmt(m.ell_c),
                       m.k_c ? std::to_string(*m.k_c) : "", fmt(m.aic), fmt(m.bic), std::to_string(m.n_pairs),
                       std::to_string(m.n_links), m.sampled ? "true" : "false", m.degenerate ? "true" : "false"});
  };
  for (const auto& e : ensembles) {
    const auto levels = static_cast<std::size_t>(e.manifold->diameter()) + 1;
    for (std::size_t i = 0; i < layers.size(); ++i) {
      const std::string layer(to_string(c.layers[i].first));
      const auto hist = link_distance_distribution(layers[i], *e.cache);
      const auto assigned = hist.total_edges - hist.unassigned_edges;
      std::vector<stats::IntervalEstimate> ci;
      if (e.runs.size() >= 3 && assigned > 0) ci = stats::leave_one_out_ci(per_run_shares(layers[i], e, levels));
      for (std::size_t d = 0; d < levels; ++d) {
        const auto it = hist.counts.find(static_cast<std::uint32_t>(d));
        const std::uint64_t count = it == hist.counts.end() ? 0 : it->second;
        std::vector<std::string> row = {e.manifold->name(), layer, std::to_string(d), std::to_string(count),
                                        assigned ? fmt(static_cast<double>(count) / static_cast<double>(assigned))
                                                 : std::string()};
        if (ci.empty()) {
          row.resize(8);
        } else {
          row.push_back(fmt(ci[d].mean));
          row.push_back(fmt(ci[d].ci_low));
          row.push_back(fmt(ci[d].ci_high));
        }
        csv::write_row(h, row);
      }
      so.seed = derive_seed(c.seed, kScoreStream, i);
      score_row(e.manifold->name(), layer, score_model(layers[i], *e.cache, e.runs.front(), so));
    }
  }
  // Euclidean baseline with as many levels as the first manifold has.
  const auto& m = ctx.matrix();
  const auto buckets = c.models.baseline_buckets ? c.models.baseline_buckets
                                                 : static_cast<std::size_t>(ensembles.front().manifold->diameter()) + 1;
  const auto baseline = naive_euclidean_baseline(m.values, m.row_labels, buckets, c.models.baseline_sample,
                                                 derive_seed(c.seed, kBaselineStream, 0));
  const CachedDistance cached(baseline, ctx.workers());
  for (std::size_t i = 0; i < layers.size(); ++i) {
    so.seed = derive_seed(c.seed, kScoreStream, i);
    score_row("euclidean", std::string(to_string(c.layers[i].first)), score_model(layers[i], cached, {}, so));
  }
}

void run_nulls(const PipelineConfig& c, Context& ctx, StageOutput& out) {
  const auto& e = ctx.ensembles().front();
  const auto& layers = ctx.layers();
  ordered_json doc;
  doc["manifold"] = e.manifold->name();
  doc["n_sims"] = c.nulls.n_sims;
  doc["swaps_per_edge"] = c.nulls.swaps_per_edge;
  doc["alpha"] = c.nulls.alpha;
  doc["layers"] = ordered_json::array();
  auto summary = out.open("null_summary.csv");
  csv::write_row(summary, {"layer", "edges", "n_sims", "rejection_fraction", "median_d", "max_p_value"});
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const std::string layer(to_string(c.layers[i].first));
    ordered_json entry;
    entry["layer"] = layer;
    if (edge_distance_sample(layers[i], *e.cache).empty()) {
      entry["status"] = "no edges to compare";
      doc["layers"].push_back(entry);
      continue;
    }
    ctx.note("nulls: " + layer);
    NullComparisonOptions o;
    o.n_sims = c.nulls.n_sims;
    o.swaps_per_edge = c.nulls.swaps_per_edge;
    o.alpha = c.nulls.alpha;
    o.seed = derive_seed(c.seed, kNullStream, i);
    o.workers = ctx.workers();
    const auto cmp = null_distribution_comparison(layers[i], *e.cache, o);
    auto hist_json = [](const LinkDistanceHistogram& h) {
      ordered_json j = ordered_json::object();
      for (const auto& [d, n] : h.counts) j[std::to_string(d)] = n;
      return j;
    };
    entry["empirical"] = hist_json(cmp.empirical);
    entry["rejection_fraction"] = cmp.rejection_fraction;
    entry["simulations"] = ordered_json::array();
    std::vector<double> ds;
    double max_p = 0.0;
    for (const auto& sim : cmp.simulations) {
      entry["simulations"].push_back({{"d", sim.ks.d_statistic},
                                      {"p_value", sim.ks.p_value},
                                      {"swaps_accepted", sim.trace.accepted},
                                      {"histogram", hist_json(sim.histogram)}});
      ds.push_back(sim.ks.d_statistic);
      max_p = std::max(max_p, sim.ks.p_value);
    }
    std::sort(ds.begin(), ds.end());
    const double median = ds.size() % 2 ? ds[ds.size() / 2] : 0.5 * (ds[ds.size() / 2 - 1] + ds[ds.size() / 2]);
    doc["layers"].push_back(entry);
    csv::write_row(summary, {layer, std::to_string(layers[i].edge_count()), std::to_string(c.nulls.n_sims),
                             fmt(cmp.rejection_fraction), fmt(median), fmt(max_p)});
  }
  auto f = out.open("null_comparison.json");
  f << doc.dump(1) << '\n';
}

void run_text(const PipelineConfig& c, Context& ctx, StageOutput& out) {
  std::ifstream in(c.resolve(*c.corpus), std::ios::binary);
  if (!in) throw Error("cannot open corpus " + *c.corpus);
  auto corpus = text::load_corpus(in);
  // Missing distances come from the first SOM ensemble when both users are known.
  const bool need = std::any_of(corpus.begin(), corpus.end(), [](const auto& a) { return !a.distance; });
  std::size_t filled = 0;
  if (need && ctx.has_features()) {
    const auto& cache = *ctx.ensembles().front().cache;
    std::map<std::string, std::size_t> index;
    for (std::size_t u = 0; u < cache.user_count(); ++u) {
      if (cache.assigned(u)) index.emplace(cache.users()[u], u);
    }
    for (auto& a : corpus) {
      if (a.distance) continue;
      const auto au = index.find(a.author), ao = index.find(a.owner);
      if (au == index.end() || ao == index.end()) continue;
      a.distance = cache.distance(au->second, ao->second);
      ++filled;
    }
  }
  const auto rules = text::TokenRules::defaults();
  const auto mining = text::MiningConfig::defaults();
  const auto prepared = text::prepare_corpus(corpus, rules, mining);
  ctx.note("text: " + std::to_string(prepared.size()) + " of " + std::to_string(corpus.size()) + " artifacts");

  auto counts = out.open("text_counts.csv");
  csv::write_row(counts, {"distance", "comment", "body"});
  std::map<std::uint32_t, std::pair<std::size_t, std::size_t>> by_distance;
  for (const auto& a : prepared) {
    auto& slot = by_distance[a.distance];
    (a.kind == text::ArtifactKind::comment ? slot.first : slot.second) += 1;
  }
  for (const auto& [d, n] : by_distance) {
    csv::write_row(counts, {std::to_string(d), std::to_string(n.first), std::to_string(n.second)});
  }

  if (!c.keywords.empty()) {
    auto freq = out.open("keyword_frequency.csv");
    csv::write_row(freq, {"unit", "keyword", "distance", "artifacts", "tokens", "frequency"});
    auto trend = out.open("keyword_trend.csv");
    csv::write_row(trend, {"unit", "keyword", "rho", "p_value", "stars", "bins"});
    for (const auto unit : {text::FrequencyUnit::per_100_artifacts, text::FrequencyUnit::per_1000_tokens}) {
      const auto t = text::keyword_frequency_by_distance(prepared, c.keywords, unit, mining);
      const std::string u(to_string(unit));
      for (std::size_t k = 0; k < t.keywords.size(); ++k) {
        for (std::size_t b = 0; b < t.distances.size(); ++b) {
          csv::write_row(freq, {u, t.keywords[k], std::to_string(t.distances[b]), std::to_string(t.artifacts[b]),
                                std::to_string(t.tokens[b]), fmt(t.frequency[k][b])});
        }
        std::vector<std::string> row = {u, t.keywords[k]};
        try {
          const auto r = text::keyword_distance_trend(t.frequency[k], t.distances);
          row.insert(row.end(), {fmt(r.rho), fmt(r.p_value), std::string(to_string(r.stars))});
        } catch (const Error&) {
          row.insert(row.end(), {"", "", ""});
        }
        row.push_back(std::to_string(t.distances.size()));
        csv::write_row(trend, row);
      }
    }
  }

  if (c.lexicon) {
    std::ifstream lin(c.resolve(*c.lexicon), std::ios::binary);
    if (!lin) throw Error("cannot open lexicon " + *c.lexicon);
    const auto lexicon = text::load_lexicon(lin);
    const auto table = text::polarity_by_distance(prepared, lexicon);
    auto pol = out.open("polarity.csv");
    csv::write_row(pol, {"distance", "negative", "neutral", "positive"});
    for (std::size_t b = 0; b < table.distances.size(); ++b) {
      csv::write_row(pol, {std::to_string(table.distances[b]), std::to_string(table.counts[0][b]),
                           std::to_string(table.counts[1][b]), std::to_string(table.counts[2][b])});
    }
    // Empty rows and columns carry no information and would break the test.
    std::vector<std::vector<std::uint64_t>> reduced;
    std::vector<bool> keep_col(table.distances.size(), false);
    for (const auto& row : table.counts) {
      for (std::size_t b = 0; b < row.size(); ++b) keep_col[b] = keep_col[b] || row[b] > 0;
    }
    for (const auto& row : table.counts) {
      std::vector<std::uint64_t> r;
      for (std::size_t b = 0; b < row.size(); ++b) {
        if (keep_col[b]) r.push_back(row[b]);
      }
      if (std::any_of(r.begin(), r.end(), [](auto x) { return x > 0; })) reduced.push_back(std::move(r));
    }
    auto chi = out.open("polarity_chi_square.csv");
    csv::write_row(chi, {"statistic", "dof", "p_value", "sentences"});
    if (reduced.size() >= 2 && reduced.front().size() >= 2) {
      const auto r = stats::chi_square_independence(reduced);
      csv::write_row(chi, {fmt(r.statistic), std::to_string(r.dof), fmt(r.p_value), std::to_string(table.sentences)});
    } else {
      csv::write_row(chi, {"", "", "", std::to_string(table.sentences)});
    }
  }
  ctx.note("text: filled " + std::to_string(filled) + " distances");
}

ordered_json hash_entry(const std::string& role, const std::string& shown, const fs::path& path) {
  return {{"role", role}, {"path", shown}, {"sha256", sha256_file(path)}};
}

}  // namespace

std::string_view to_string(Stage stage) {
  for (const auto& [s, name] : stage_names()) {
    if (s == stage) return name;
  }
  return "unknown";
}

Stage parse_stage(std::string_view name) {
  if (name == "som-train") return Stage::som;
  for (const auto& [s, n] : stage_names()) {
    if (n == name) return s;
  }
  throw InvalidArgument("unknown stage: " + std::string(name));
}

const std::vector<Stage>& all_stages() {
  static const std::vector<Stage> stages = [] {
    std::vector<Stage> v;
    for (const auto& [s, name] : stage_names()) v.push_back(s);
    return v;
  }();
  return stages;
}

int exit_code(Stage stage) {
  const auto& all = all_stages();
  return 10 + static_cast<int>(std::find(all.begin(), all.end(), stage) - all.begin());
}

std::string_view to_string(StageStatus status) {
  switch (status) {
    case StageStatus::ok: return "ok";
    case StageStatus::skipped: return "skipped";
    case StageStatus::not_selected: return "not_selected";
    case StageStatus::failed: return "failed";
    case StageStatus::not_run: return "not_run";
  }
  return "unknown";
}

fs::path PipelineConfig::resolve(const std::string& path) const {
  const fs::path p(path);
  return p.is_absolute() ? p : base_dir / p;
}

void PipelineConfig::validate() const {
  if (som.runs < 1) throw InvalidArgument("som.runs must be >= 1");
  som.train.validate();
  if (manifolds.empty()) throw InvalidArgument("at least one manifold is required");
  if (richclub.n_random < 1) throw InvalidArgument("richclub.n_random must be >= 1");
  if (nulls.n_sims < 1) throw InvalidArgument("nulls.n_sims must be >= 1");
  if (!(nulls.alpha > 0.0 && nulls.alpha < 1.0)) throw InvalidArgument("nulls.alpha must be in (0, 1)");
  if (shift <= 0.0) throw InvalidArgument("features.shift must be positive");
  auto must_exist = [&](const std::string& what, const std::string& path) {
    if (!fs::is_regular_file(resolve(path))) throw InvalidArgument(what + " not found: " + path);
  };
  for (const auto& [layer, path] : layers) must_exist("layer " + std::string(to_string(layer)), path);
  if (features) must_exist("feature table", *features);
  if (accounts) must_exist("account table", *accounts);
  if (corpus) must_exist("corpus", *corpus);
  if (lexicon) must_exist("lexicon", *lexicon);
  for (const auto& m : manifolds) {
    if (m.rfind("file:", 0) == 0) must_exist("manifold", m.substr(5));
  }
}

PipelineConfig parse_config(std::string_view json_text, const fs::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what(), 0);
  }
  PipelineConfig c;
  c.base_dir = base_dir;
  try {
    check_keys(j, "config", {"seed", "workers", "output_dir", "inputs", "manifolds", "features", "som", "richclub",
                             "nulls", "models", "text", "stages"});
    read(j, "seed", c.seed);
    read(j, "workers", c.workers);
    read(j, "output_dir", c.output_dir);
    if (j.contains("inputs")) {
      const auto& in = j.at("inputs");
      check_keys(in, "inputs", {"layers", "features", "accounts", "corpus", "lexicon"});
      if (in.contains("layers")) {
        for (const auto& [name, path] : in.at("layers").items()) {
          const auto layer = parse_layer(name);
          if (layer == Layer::other && name != "other") throw InvalidArgument("unknown layer: " + name);
          c.layers.emplace_back(layer, path.get<std::string>());
        }
      }
      read_path(in, "features", c.features);
      read_path(in, "accounts", c.accounts);
      read_path(in, "corpus", c.corpus);
      read_path(in, "lexicon", c.lexicon);
    }
    read(j, "manifolds", c.manifolds);
    if (j.contains("features")) {
      check_keys(j.at("features"), "features", {"activity_threshold", "shift"});
      read(j.at("features"), "activity_threshold", c.activity_threshold);
      read(j.at("features"), "shift", c.shift);
    }
    if (j.contains("som")) {
      const auto& s = j.at("som");
      check_keys(s, "som", {"runs", "epochs", "alpha_start", "alpha_end", "sigma_start", "sigma_end"});
      read(s, "runs", c.som.runs);
      read(s, "epochs", c.som.train.epochs);
      read(s, "alpha_start", c.som.train.alpha_start);
      read(s, "alpha_end", c.som.train.alpha_end);
      read(s, "sigma_start", c.som.train.sigma_start);
      read(s, "sigma_end", c.som.train.sigma_end);
    }
    if (j.contains("richclub")) {
      const auto& r = j.at("richclub");
      check_keys(r, "richclub", {"mode", "directed", "undirected", "n_random", "swaps_per_edge"});
      if (r.contains("mode")) c.richclub.mode = parse_degree_mode(r.at("mode").get<std::string>());
      read(r, "directed", c.richclub.directed);
      read(r, "undirected", c.richclub.undirected);
      read(r, "n_random", c.richclub.n_random);
      read(r, "swaps_per_edge", c.richclub.swaps_per_edge);
    }
    if (j.contains("nulls")) {
      const auto& n = j.at("nulls");
      check_keys(n, "nulls", {"n_sims", "swaps_per_edge", "alpha"});
      read(n, "n_sims", c.nulls.n_sims);
      read(n, "swaps_per_edge", c.nulls.swaps_per_edge);
      read(n, "alpha", c.nulls.alpha);
    }
    if (j.contains("models")) {
      const auto& m = j.at("models");
      check_keys(m, "models", {"baseline_buckets", "baseline_sample", "max_exhaustive_pairs", "sample_pairs"});
      read(m, "baseline_buckets", c.models.baseline_buckets);
      read(m, "baseline_sample", c.models.baseline_sample);
      read(m, "max_exhaustive_pairs", c.models.max_exhaustive_pairs);
      read(m, "sample_pairs", c.models.sample_pairs);
    }
    if (j.contains("text")) {
      check_keys(j.at("text"), "text", {"keywords"});
      read(j.at("text"), "keywords", c.keywords);
    }
    if (j.contains("stages")) {
      for (const auto& s : j.at("stages")) c.stages.insert(parse_stage(s.get<std::string>()));
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("bad config value: ") + e.what());
  }
  return c;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  auto base = fs::path(path).parent_path();
  if (base.empty()) base = ".";
  return parse_config(ss.str(), base);
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot hash " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> md(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!md || EVP_DigestInit_ex(md.get(), EVP_sha256(), nullptr) != 1) throw Error("sha256 unavailable");
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    EVP_DigestUpdate(md.get(), buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(md.get(), digest, &len);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return hex.str();
}

PipelineResult run_pipeline(const PipelineConfig& c, std::ostream* log) {
  PipelineResult result;
  c.validate();
  result.output_dir = c.resolve(c.output_dir);
  fs::create_directories(result.output_dir);
  Context ctx(c, log);

  bool aborted = false;
  for (const auto stage : all_stages()) {
    StageReport report;
    report.stage = stage;
    if (aborted) {
      result.stages.push_back(std::move(report));
      continue;
    }
    if (!c.stages.empty() && !c.stages.count(stage)) {
      report.status = StageStatus::not_selected;
      result.stages.push_back(std::move(report));
      continue;
    }
    const bool layers = ctx.has_layers(), features = ctx.has_features();
    std::string missing;
    switch (stage) {
      case Stage::ingest:
        if (!layers && !features && !c.accounts) missing = "no inputs";
        break;
      case Stage::assort:
      case Stage::richclub:
        if (!layers) missing = "no edge lists";
        break;
      case Stage::som:
        if (!features) missing = "no feature table";
        break;
      case Stage::distances:
      case Stage::nulls:
        if (!layers || !features) missing = "needs edge lists and a feature table";
        break;
      case Stage::text:
        if (!c.corpus) missing = "no corpus";
        break;
    }
    if (!missing.empty()) {
      report.status = StageStatus::skipped;
      report.message = missing;
      result.stages.push_back(std::move(report));
      continue;
    }
    ctx.note("stage " + std::string(to_string(stage)));
    StageOutput out(result.output_dir, report);
    try {
      switch (stage) {
        case Stage::ingest: run_ingest(c, ctx, out); break;
        case Stage::assort: run_assort(c, ctx, out); break;
        case Stage::richclub: run_richclub(c, ctx, out); break;
        case Stage::som: run_som(c, ctx, out); break;
        case Stage::distances: run_distances(c, ctx, out); break;
        case Stage::nulls: run_nulls(c, ctx, out); break;
        case Stage::text: run_text(c, ctx, out); break;
      }
      report.status = StageStatus::ok;
    } catch (const std::exception& e) {
      report.status = StageStatus::failed;
      report.message = e.what();
      result.exit_code = exit_code(stage);
      aborted = true;
      ctx.note("stage " + std::string(to_string(stage)) + " failed: " + e.what());
    }
    result.stages.push_back(std::move(report));
  }

  ordered_json manifest;
  manifest["format"] = "homophily-report";
  manifest["version"] = 1;
  manifest["seed"] = c.seed;
  manifest["exit_code"] = result.exit_code;
  manifest["inputs"] = ordered_json::array();
  for (const auto& [layer, path] : c.layers) {
    manifest["inputs"].push_back(hash_entry("layer:" + std::string(to_string(layer)), path, c.resolve(path)));
  }
  const std::pair<const char*, const std::optional<std::string>*> singles[] = {
      {"features", &c.features}, {"accounts", &c.accounts}, {"corpus", &c.corpus}, {"lexicon", &c.lexicon}};
  for (const auto& [role, path] : singles) {
    if (*path) manifest["inputs"].push_back(hash_entry(role, **path, c.resolve(**path)));
  }
  for (const auto& m : c.manifolds) {
    if (m.rfind("file:", 0) == 0) manifest["inputs"].push_back(hash_entry("manifold", m, c.resolve(m.substr(5))));
  }
  manifest["stages"] = ordered_json::array();
  manifest["artifacts"] = ordered_json::array();
  for (const auto& r : result.stages) {
    ordered_json s = {{"name", to_string(r.stage)}, {"status", to_string(r.status)}};
    if (!r.message.empty()) s["message"] = r.message;
    manifest["stages"].push_back(s);
    for (const auto& name : r.outputs) {
      const auto path = result.output_dir / name;
      ordered_json a = {{"path", name},
                        {"stage", to_string(r.stage)},
                        {"complete", r.status == StageStatus::ok}};
      a["sha256"] = fs::exists(path) ? sha256_file(path) : "";
      manifest["artifacts"].push_back(a);
    }
  }
  std::ofstream mf(result.output_dir / "manifest.json", std::ios::binary | std::ios::trunc);
  mf << manifest.dump(2) << '\n';
  return result;
}

}  // namespace homophily::pipeline
