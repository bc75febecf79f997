// Command-line front end: pipeline stages from a config file, plus a few
// standalone helpers for quick looks at a single input.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "homophily/assortativity.hpp"
#include "homophily/csv.hpp"
#include "homophily/demo.hpp"
#include "homophily/error.hpp"
#include "homophily/features.hpp"
#include "homophily/manifold.hpp"
#include "homophily/pipeline.hpp"
#include "homophily/richclub.hpp"
#include "homophily/som.hpp"

namespace hp = homophily::pipeline;
using namespace homophily;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::vector<std::string> stages;
  std::optional<std::string> out;
  bool quiet = false;
};

void add_common(CLI::App* app, Common& c, bool with_stage) {
  app->add_option("--config", c.config, "Pipeline config (JSON)");
  app->add_option("--seed", c.seed, "Override the config seed");
  app->add_option("--workers", c.workers, "Worker threads (0 = all cores)");
  app->add_option("--out", c.out, "Override the output directory");
  app->add_flag("--quiet,-q", c.quiet, "No progress output");
  if (with_stage) app->add_option("--stage", c.stages, "Run only these stages (repeatable)");
}

int run_config(const Common& c, std::vector<hp::Stage> forced) {
  if (c.config.empty()) {
    std::cerr << "error: --config is required\n";
    return hp::kConfigError;
  }
  hp::PipelineConfig cfg;
  try {
    cfg = hp::load_config(c.config);
    if (c.seed) cfg.seed = *c.seed;
    if (c.workers) cfg.workers = *c.workers;
    if (c.out) cfg.output_dir = std::filesystem::absolute(*c.out).string();
    if (!forced.empty()) {
      cfg.stages = {forced.begin(), forced.end()};
    } else if (!c.stages.empty()) {
      cfg.stages.clear();
      for (const auto& s : c.stages) cfg.stages.insert(hp::parse_stage(s));
    }
    cfg.validate();
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return hp::kConfigError;
  }
  const auto result = hp::run_pipeline(cfg, c.quiet ? nullptr : &std::cerr);
  for (const auto& s : result.stages) {
    if (!c.quiet || s.status == hp::StageStatus::failed) {
      std::cerr << hp::to_string(s.stage) << ": " << hp::to_string(s.status);
      if (!s.message.empty()) std::cerr << " (" << s.message << ')';
      std::cerr << '\n';
    }
  }
  if (!c.quiet) std::cerr << "report: " << result.output_dir.string() << '\n';
  return result.exit_code;
}

Network load_edges(const std::string& path, const std::string& format) {
  EdgeListOptions o;
  o.format = format == "tsv" ? EdgeListFormat::tsv : EdgeListFormat::csv;
  return load_edge_list_file(path, o);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Homophily analysis of developer interaction networks"};
  app.require_subcommand(1);

  Common report_opts;
  auto* report = app.add_subcommand("report", "Run the pipeline (all stages unless --stage)");
  add_common(report, report_opts, true);

  struct StageCommand {
    const char* name;
    const char* help;
    hp::Stage stage;
    Common opts;
    CLI::App* app = nullptr;
  };
  std::vector<StageCommand> stage_commands = {
      {"distances", "Link-distance histograms and model scores", hp::Stage::distances, {}},
      {"nulls", "Degree-preserving null comparison of link distances", hp::Stage::nulls, {}},
      {"text", "Keyword frequencies, trends and sentiment by distance", hp::Stage::text, {}},
  };
  for (auto& sc : stage_commands) {
    sc.app = app.add_subcommand(sc.name, sc.help);
    add_common(sc.app, sc.opts, false);
  }

  // assort and richclub also work on a single edge list.
  Common assort_opts;
  std::string assort_edges, assort_format = "csv";
  bool assort_log = false;
  auto* assort = app.add_subcommand("assort", "Degree assortativity (config stage or one edge list)");
  add_common(assort, assort_opts, false);
  assort->add_option("--edges", assort_edges, "Edge list to analyse directly");
  assort->add_option("--format", assort_format, "csv or tsv")->check(CLI::IsMember({"csv", "tsv"}));
  assort->add_flag("--log", assort_log, "Correlate ln(degree + 1) for Pearson");

  Common rich_opts;
  std::string rich_edges, rich_format = "csv", rich_mode = "total";
  bool rich_undirected = false;
  std::size_t rich_random = 50;
  auto* rich = app.add_subcommand("richclub", "Normalised rich-club curve (config stage or one edge list)");
  add_common(rich, rich_opts, false);
  rich->add_option("--edges", rich_edges, "Edge list to analyse directly");
  rich->add_option("--format", rich_format, "csv or tsv")->check(CLI::IsMember({"csv", "tsv"}));
  rich->add_option("--mode", rich_mode, "total, in or out")->check(CLI::IsMember({"total", "in", "out"}));
  rich->add_flag("--undirected", rich_undirected, "Use the undirected simple graph");
  rich->add_option("--randomizations", rich_random, "Null replicates");

  Common som_opts;
  std::string som_features, som_manifold = "klein", som_model;
  std::size_t som_epochs = 50;
  double som_threshold = 10.0;
  auto* som = app.add_subcommand("som-train", "Train SOM ensembles (config stage or one model)");
  add_common(som, som_opts, false);
  som->add_option("--features", som_features, "Feature table to train one model on");
  som->add_option("--manifold", som_manifold, "grid:WxH, torus:WxH, klein or file:PATH");
  som->add_option("--epochs", som_epochs, "Training epochs");
  som->add_option("--activity-threshold", som_threshold, "Minimum activity to keep a user");
  som->add_option("--model-out", som_model, "Where to write the model JSON");

  std::string demo_dir;
  std::size_t demo_users = 2000, demo_comments = 10000, demo_runs = 20;
  std::uint64_t demo_seed = 1;
  auto* demo = app.add_subcommand("demo-data", "Write the synthetic demo dataset and its config");
  demo->add_option("dir", demo_dir, "Target directory")->required();
  demo->add_option("--users", demo_users, "Users");
  demo->add_option("--comments", demo_comments, "Comments");
  demo->add_option("--runs", demo_runs, "SOM runs in the generated config");
  demo->add_option("--seed", demo_seed, "Generator seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (report->parsed()) return run_config(report_opts, {});
    for (auto& sc : stage_commands) {
      if (sc.app->parsed()) return run_config(sc.opts, {sc.stage});
    }
    if (assort->parsed()) {
      if (assort_edges.empty()) return run_config(assort_opts, {hp::Stage::assort});
      const auto g = load_edges(assort_edges, assort_format);
      csv::write_row(std::cout, {"measure", "value", "edges"});
      for (const auto& r : assortativity_table(g, assort_log)) {
        const std::string name = std::string(r.kind == CorrelationKind::pearson ? "r_" : "rho_") +
                                 std::string(to_string(r.mode));
        csv::write_row(std::cout, {name, r.value ? csv::format_double(*r.value) : "", std::to_string(r.n_edges)});
      }
      return 0;
    }
    if (rich->parsed()) {
      if (rich_edges.empty()) return run_config(rich_opts, {hp::Stage::richclub});
      const auto g = load_edges(rich_edges, rich_format);
      NormalizeOptions o;
      o.n_random = rich_random;
      o.seed = rich_opts.seed.value_or(1);
      o.workers = rich_opts.workers.value_or(0);
      const auto curve = normalized_rich_club(g, parse_degree_mode(rich_mode), !rich_undirected, o);
      csv::write_row(std::cout, {"k", "club_nodes", "phi", "phi_random_mean", "rho", "ci_low", "ci_high"});
      auto f = [](const std::optional<double>& v) { return v ? csv::format_double(*v) : std::string(); };
      for (const auto& p : curve.points) {
        if (p.club_nodes < 2) continue;
        csv::write_row(std::cout, {std::to_string(p.k), std::to_string(p.club_nodes), f(p.phi),
                                   f(p.phi_random_mean), f(p.rho), f(p.ci_low), f(p.ci_high)});
      }
      return 0;
    }
    if (som->parsed()) {
      if (som_features.empty()) return run_config(som_opts, {hp::Stage::som});
      std::ifstream in(som_features, std::ios::binary);
      if (!in) throw Error("cannot open " + som_features);
      const auto table = filter_active_users(load_feature_table(in), som_threshold);
      const auto m = transform_features(table);
      TrainConfig cfg;
      cfg.epochs = som_epochs;
      auto manifold = std::make_shared<const Manifold>(build_manifold(som_manifold));
      const auto model = train_som(m.values, manifold, cfg, som_opts.seed.value_or(1));
      std::cerr << "users " << m.values.rows() << ", quantization error "
                << csv::format_double(quantization_error(model, m.values)) << '\n';
      if (som_model.empty()) {
        save_model(std::cout, model);
      } else {
        std::ofstream out(som_model, std::ios::binary);
        save_model(out, model);
      }
      return 0;
    }
    if (demo->parsed()) {
      demo::DemoOptions o;
      o.users = demo_users;
      o.comments = demo_comments;
      o.som_runs = demo_runs;
      o.seed = demo_seed;
      const auto files = demo::write_demo_dataset(demo_dir, o);
      std::cout << files.config << '\n';
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
