#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "homophily/demo.hpp"
#include "homophily/error.hpp"
#include "homophily/pipeline.hpp"

using namespace homophily;
using namespace homophily::pipeline;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("homophily_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

PipelineConfig small_demo(const fs::path& dir) {
  demo::DemoOptions o;
  o.users = 300;
  o.comments = 400;
  o.som_runs = 2;
  const auto files = demo::write_demo_dataset(dir.string(), o);
  auto c = load_config(files.config);
  c.workers = 1;
  c.som.runs = 2;
  c.som.train.epochs = 3;
  c.richclub.n_random = 4;
  c.nulls.n_sims = 5;
  c.manifolds = {"klein"};
  return c;
}

nlohmann::json manifest(const fs::path& out) { return nlohmann::json::parse(slurp(out / "manifest.json")); }

std::string status_of(const nlohmann::json& m, const std::string& stage) {
  for (const auto& s : m.at("stages"))
    if (s.at("name") == stage) return s.at("status");
  return "";
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("stage names and exit codes") {
  CHECK(all_stages().size() == 7);
  CHECK(exit_code(Stage::ingest) == 10);
  CHECK(exit_code(Stage::text) == 16);
  CHECK(parse_stage("som-train") == Stage::som);
  CHECK(to_string(parse_stage("nulls")) == "nulls");
  CHECK_THROWS_AS(parse_stage("plot"), InvalidArgument);
}

TEST_CASE("config parsing") {
  const auto c = parse_config(R"({"seed": 7, "inputs": {"layers": {"following": "f.csv"}},
                                  "som": {"runs": 3}, "stages": ["ingest", "assort"]})",
                              "/data");
  CHECK(c.seed == 7);
  CHECK(c.som.runs == 3);
  REQUIRE(c.layers.size() == 1);
  CHECK(c.layers[0].first == Layer::following);
  CHECK(c.resolve("f.csv") == fs::path("/data/f.csv"));
  CHECK(c.stages.size() == 2);
  CHECK_THROWS_AS(parse_config(R"({"sed": 7})", "."), InvalidArgument);
  CHECK_THROWS_AS(parse_config(R"({"som": {"epoch": 7}})", "."), InvalidArgument);
  CHECK_THROWS_AS(parse_config(R"({"inputs": {"layers": {"likes": "x"}}})", "."), InvalidArgument);
  CHECK_THROWS_AS(parse_config(R"({"seed": "seven"})", "."), InvalidArgument);
  CHECK_THROWS_AS(parse_config("{seed", "."), ParseError);
}

TEST_CASE("validation finds missing files") {
  auto c = parse_config(R"({"inputs": {"features": "nowhere.csv"}})", scratch("validate"));
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
}

TEST_CASE("text stage is skipped without a corpus") {
  const auto dir = scratch("nocorpus");
  auto c = small_demo(dir);
  c.corpus.reset();
  c.stages = {Stage::ingest, Stage::assort, Stage::text};
  const auto r = run_pipeline(c);
  CHECK(r.exit_code == 0);
  const auto m = manifest(r.output_dir);
  CHECK(status_of(m, "text") == "skipped");
  CHECK(status_of(m, "assort") == "ok");
  CHECK(status_of(m, "som") == "not_selected");
  CHECK(fs::exists(r.output_dir / "assortativity.csv"));
  CHECK_FALSE(fs::exists(r.output_dir / "keyword_frequency.csv"));
}

TEST_CASE("reruns are byte-identical") {
  const auto dir = scratch("determinism");
  auto c = small_demo(dir);
  c.output_dir = "run_a";
  const auto a = run_pipeline(c);
  c.output_dir = "run_b";
  const auto b = run_pipeline(c);
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(a.output_dir)) {
    const auto name = entry.path().filename();
    CAPTURE(name.string());
    REQUIRE(fs::exists(b.output_dir / name));
    CHECK(slurp(entry.path()) == slurp(b.output_dir / name));
    ++compared;
  }
  CHECK(compared >= 12);
  for (const auto& s : manifest(a.output_dir).at("stages")) CHECK(s.at("status") == "ok");
}

TEST_CASE("manifest hashes follow the inputs") {
  const auto dir = scratch("hashes");
  auto c = small_demo(dir);
  c.stages = {Stage::ingest};
  const auto before = manifest(run_pipeline(c).output_dir);
  {
    std::ofstream lex(c.resolve(*c.lexicon), std::ios::app);
    lex << "shiny\t0.4\n";
  }
  const auto after = manifest(run_pipeline(c).output_dir);
  REQUIRE(before.at("inputs").size() == after.at("inputs").size());
  for (std::size_t i = 0; i < before.at("inputs").size(); ++i) {
    const auto& x = before.at("inputs")[i];
    const auto& y = after.at("inputs")[i];
    if (x.at("role") == "lexicon") {
      CHECK(x.at("sha256") != y.at("sha256"));
    } else {
      CHECK(x.at("sha256") == y.at("sha256"));
    }
  }
  CHECK(sha256_file(c.resolve(*c.lexicon)).size() == 64);
}

TEST_CASE("failing stage sets the exit code and stops") {
  const auto dir = scratch("failure");
  auto c = small_demo(dir);
  {
    std::ofstream corpus(c.resolve(*c.corpus), std::ios::app);
    corpus << "{broken\n";
  }
  c.stages = {Stage::ingest, Stage::text};
  auto r = run_pipeline(c);
  CHECK(r.exit_code == exit_code(Stage::text));
  CHECK(status_of(manifest(r.output_dir), "text") == "failed");

  std::ofstream layer(c.resolve(c.layers[0].second), std::ios::app);
  layer << "not,an,edge,line\n";
  layer.close();
  c.stages.clear();
  r = run_pipeline(c);
  CHECK(r.exit_code == 10);
  const auto m = manifest(r.output_dir);
  CHECK(status_of(m, "ingest") == "failed");
  CHECK(status_of(m, "assort") == "not_run");
  CHECK(m.at("exit_code") == 10);
}

}  // TEST_SUITE
