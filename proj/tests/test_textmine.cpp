#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "homophily/error.hpp"
#include "homophily/porter.hpp"
#include "homophily/random.hpp"
#include "homophily/stats.hpp"
#include "homophily/textmine.hpp"

using namespace homophily;
using namespace homophily::text;

namespace {

struct Golden {
  int id;
  std::string text;
  std::string preprocessed;
  std::vector<std::string> tokens;
};

std::vector<Golden> load_golden() {
  std::ifstream in(std::string(HOMOPHILY_TEST_DIR) + "/golden/text_golden.jsonl", std::ios::binary);
  REQUIRE(in);
  std::vector<Golden> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    out.push_back({j.at("id").get<int>(), j.at("text").get<std::string>(), j.at("preprocessed").get<std::string>(),
                   j.at("tokens").get<std::vector<std::string>>()});
  }
  return out;
}

// Spearman by counting ranks and the plain Pearson formula.
double rank_oracle(const std::vector<double>& x, const std::vector<double>& y) {
  auto rank = [](const std::vector<double>& v) {
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      double lt = 0, eq = 0;
      for (double w : v) {
        lt += w < v[i];
        eq += w == v[i];
      }
      r[i] = lt + (eq + 1) / 2;
    }
    return r;
  };
  const auto rx = rank(x), ry = rank(y);
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += rx[i] / n;
    my += ry[i] / n;
  }
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

PreparedArtifact prepared(std::uint32_t d, const std::string& text) {
  PreparedArtifact p;
  p.distance = d;
  p.normalized = preprocess_comment(text);
  p.tokens = mining_normalize(p.normalized);
  return p;
}

}  // namespace

TEST_SUITE("textmine") {

TEST_CASE("preprocess examples") {
  CHECK(preprocess_comment("see https://github.com/x/y") == "see [github-link].");
  CHECK(preprocess_comment("@alice can you check") == "[user-mention] can you check.");
  CHECK(preprocess_comment("don't merge") == "do not merge.");
}

TEST_CASE("mining examples") {
  CHECK(mining_normalize("this does not work") == std::vector<std::string>{"not-work"});
  CHECK(mining_normalize("[code-snippet]") == std::vector<std::string>{"[code-snippet]"});
  CHECK(mining_normalize("Fixed 3 bugs!!") == std::vector<std::string>{"fix", "bug"});
}

TEST_CASE("golden corpus") {
  const auto golden = load_golden();
  REQUIRE(golden.size() == 50);
  for (const auto& g : golden) {
    CAPTURE(g.id);
    const auto p = preprocess_comment(g.text);
    CHECK(p == g.preprocessed);
    CHECK(mining_normalize(p) == g.tokens);
    // Idempotence on every golden output.
    CHECK(preprocess_comment(g.preprocessed) == g.preprocessed);
    CHECK(preprocess_comment(preprocess_comment(g.text)) == p);
    // Bracketed tokens survive mining untouched.
    for (const auto& t : g.tokens) {
      if (t.front() == '[') CHECK(p.find('[') != std::string::npos);
    }
  }
}

TEST_CASE("bracketed tokens are never split or stemmed") {
  const auto t = mining_normalize("[code-snippet] [github-link] [user-mention] [repo-name] [automated-message]");
  CHECK(t == std::vector<std::string>{"[code-snippet]", "[github-link]", "[user-mention]", "[repo-name]",
                                      "[automated-message]"});
  MiningConfig c = MiningConfig::defaults();
  c.stop_words.insert("[code-snippet]");
  CHECK(mining_normalize("[code-snippet]", c) == std::vector<std::string>{"[code-snippet]"});
}

TEST_CASE("custom automated patterns") {
  auto rules = TokenRules::defaults();
  rules.automated_patterns = {"deploy preview ready"};
  CHECK(preprocess_comment("Deploy Preview READY for abc", rules) == "[automated-message].");
  CHECK(preprocess_comment("I am a bot", rules) == "I am a bot.");
}

TEST_CASE("porter stemmer vocabulary") {
  const std::pair<const char*, const char*> cases[] = {
      {"caresses", "caress"},  {"ponies", "poni"},       {"ties", "ti"},          {"caress", "caress"},
      {"cats", "cat"},         {"feed", "feed"},         {"agreed", "agre"},      {"plastered", "plaster"},
      {"bled", "bled"},        {"motoring", "motor"},    {"sing", "sing"},        {"conflated", "conflat"},
      {"troubled", "troubl"},  {"sized", "size"},        {"hopping", "hop"},      {"tanned", "tan"},
      {"falling", "fall"},     {"hissing", "hiss"},      {"fizzed", "fizz"},      {"failing", "fail"},
      {"filing", "file"},      {"happy", "happi"},       {"sky", "sky"},          {"relational", "relat"},
      {"conditional", "condit"}, {"rational", "ration"}, {"valenci", "valenc"},   {"hesitanci", "hesit"},
      {"digitizer", "digit"},  {"conformabli", "conform"}, {"radicalli", "radic"}, {"differentli", "differ"},
      {"vileli", "vile"},      {"analogousli", "analog"}, {"vietnamization", "vietnam"},
      {"predication", "predic"}, {"operator", "oper"},   {"feudalism", "feudal"}, {"decisiveness", "decis"},
      {"hopefulness", "hope"}, {"callousness", "callous"}, {"formaliti", "formal"}, {"sensitiviti", "sensit"},
      {"sensibiliti", "sensibl"}, {"triplicate", "triplic"}, {"formative", "form"}, {"formalize", "formal"},
      {"electriciti", "electr"}, {"electrical", "electr"}, {"hopeful", "hope"},   {"goodness", "good"},
      {"revival", "reviv"},    {"allowance", "allow"},   {"inference", "infer"},  {"airliner", "airlin"},
      {"gyroscopic", "gyroscop"}, {"adjustable", "adjust"}, {"defensible", "defens"}, {"irritant", "irrit"},
      {"replacement", "replac"}, {"adjustment", "adjust"}, {"dependent", "depend"}, {"adoption", "adopt"},
      {"homologou", "homolog"}, {"communism", "commun"}, {"activate", "activ"},  {"angulariti", "angular"},
      {"homologous", "homolog"}, {"effective", "effect"}, {"bowdlerize", "bowdler"}, {"probate", "probat"},
      {"rate", "rate"},        {"cease", "ceas"},        {"controll", "control"}, {"roll", "roll"},
      {"generalizations", "gener"}, {"oscillators", "oscil"},
  };
  for (const auto& [word, stem] : cases) {
    CAPTURE(word);
    CHECK(porter_stem(word) == stem);
  }
  CHECK(porter_stem("is") == "is");
  CHECK(porter_stem("c3po") == "c3po");
}

TEST_CASE("keyword normalisation") {
  CHECK(normalize_keyword("Merge") == "merg");
  CHECK(normalize_keyword("not-work") == "not-work");
  CHECK(normalize_keyword("reproduce") == "reproduc");
  CHECK(normalize_keyword("[code-snippet]") == "[code-snippet]");
}

TEST_CASE("corpus io and analyzability") {
  std::istringstream in(
      "{\"author\":\"a\",\"owner\":\"b\",\"kind\":\"comment\",\"text\":\"hi\",\"distance\":2}\n"
      "\n"
      "{\"author\":\"a\",\"owner\":\"a\",\"kind\":\"body\",\"text\":\"own repo\",\"distance\":1}\n"
      "{\"author\":\"c\",\"owner\":\"b\",\"text\":\"no distance\",\"distance\":null}\n");
  const auto corpus = load_corpus(in);
  REQUIRE(corpus.size() == 3);
  CHECK(corpus[0].analyzable());
  CHECK_FALSE(corpus[1].analyzable());
  CHECK(corpus[1].kind == ArtifactKind::body);
  CHECK_FALSE(corpus[2].analyzable());
  const auto prepared_corpus = prepare_corpus(corpus, TokenRules::defaults(), MiningConfig::defaults());
  REQUIRE(prepared_corpus.size() == 1);
  CHECK(prepared_corpus[0].distance == 2);

  std::ostringstream out;
  write_corpus(out, corpus);
  std::istringstream back(out.str());
  const auto again = load_corpus(back);
  CHECK(again[2].text == "no distance");
  CHECK_FALSE(again[2].distance.has_value());

  std::istringstream bad("{\"author\":\"a\",\"owner\":\"b\",\"kind\":\"tweet\",\"text\":\"x\"}\n");
  CHECK_THROWS_AS(load_corpus(bad), ParseError);
  std::istringstream broken("{not json\n");
  CHECK_THROWS_AS(load_corpus(broken), ParseError);
}

TEST_CASE("keyword frequency") {
  SUBCASE("single artifact") {
    const std::vector<PreparedArtifact> c = {prepared(0, "please merge this")};
    const auto t = keyword_frequency_by_distance(c, {"merge", "error"}, FrequencyUnit::per_100_artifacts);
    CHECK(t.distances == std::vector<std::uint32_t>{0});
    CHECK(t.frequency[0][0] == 100.0);
    CHECK(t.frequency[1][0] == 0.0);
  }
  SUBCASE("units") {
    const std::vector<PreparedArtifact> c = {prepared(1, "merge merge conflict"), prepared(1, "nothing here"),
                                             prepared(3, "merge it")};
    const auto share = keyword_frequency_by_distance(c, {"merge"}, FrequencyUnit::per_100_artifacts);
    CHECK(share.distances == std::vector<std::uint32_t>{1, 3});
    CHECK(share.artifacts == std::vector<std::size_t>{2, 1});
    CHECK(share.frequency[0] == std::vector<double>{50.0, 100.0});
    const auto rate = keyword_frequency_by_distance(c, {"merge"}, FrequencyUnit::per_1000_tokens);
    // Tokens: merg merg conflict | noth | merg.
    CHECK(rate.tokens == std::vector<std::size_t>{4, 1});
    CHECK(rate.frequency[0][0] == doctest::Approx(500.0));
    CHECK(rate.frequency[0][1] == doctest::Approx(1000.0));
  }
  SUBCASE("order invariance") {
    std::vector<PreparedArtifact> c;
    Rng rng(3);
    const char* texts[] = {"merge please", "error again", "help with error", "looks good", "merge conflict error"};
    for (int i = 0; i < 60; ++i) c.push_back(prepared(static_cast<std::uint32_t>(rng.below(5)), texts[rng.below(5)]));
    const auto a = keyword_frequency_by_distance(c, {"merge", "error"}, FrequencyUnit::per_100_artifacts);
    std::reverse(c.begin(), c.end());
    const auto b = keyword_frequency_by_distance(c, {"merge", "error"}, FrequencyUnit::per_100_artifacts);
    CHECK(a.frequency == b.frequency);
  }
  SUBCASE("planted gradient") {
    std::vector<PreparedArtifact> c;
    for (std::uint32_t d = 0; d <= 6; ++d) {
      for (std::uint32_t i = 0; i < 20; ++i) c.push_back(prepared(d, i < 3 * d ? "there is an error" : "fine"));
    }
    const auto t = keyword_frequency_by_distance(c, {"error"}, FrequencyUnit::per_100_artifacts);
    for (std::size_t b = 1; b < t.distances.size(); ++b) CHECK(t.frequency[0][b] > t.frequency[0][b - 1]);
  }
  SUBCASE("empty corpus") {
    CHECK_THROWS_AS(keyword_frequency_by_distance({}, {"x"}, FrequencyUnit::per_100_artifacts), InvalidArgument);
  }
}

TEST_CASE("keyword trends on the published rows") {
  std::vector<std::uint32_t> d(11);
  for (std::uint32_t i = 0; i < 11; ++i) d[i] = i;
  const std::vector<double> dd(d.begin(), d.end());
  const std::vector<double> merge = {3.73, 3.57, 3.69, 3.67, 3.59, 3.85, 3.24, 2.46, 2.73, 3.27, 1.43};
  const std::vector<double> error = {3.20, 3.77, 4.27, 4.65, 4.85, 5.16, 6.30, 5.99, 6.43, 7.69, 10.04};
  const auto m = keyword_distance_trend(merge, d);
  const auto e = keyword_distance_trend(error, d);
  CHECK(std::abs(m.rho - rank_oracle(dd, merge)) < 1e-12);
  CHECK(std::abs(e.rho - rank_oracle(dd, error)) < 1e-12);
  // Without ties: 1 - 6 sum(d^2) / (n (n^2 - 1)); sums are 384 and 2.
  CHECK(std::abs(m.rho - (-41.0 / 55.0)) < 1e-12);
  CHECK(std::abs(e.rho - 109.0 / 110.0) < 1e-12);
  CHECK(e.stars == stats::Stars::three);
  CHECK(m.stars != stats::Stars::none);

  std::vector<double> up(11), down(11);
  for (int i = 0; i < 11; ++i) {
    up[i] = i * 0.5;
    down[i] = -i * 0.5;
  }
  CHECK(keyword_distance_trend(up, d).rho == 1.0);
  CHECK(keyword_distance_trend(up, d).stars == stats::Stars::three);
  CHECK(keyword_distance_trend(down, d).rho == -1.0);
  CHECK_THROWS_AS(keyword_distance_trend(std::vector<double>(11, 2.0), d), UndefinedError);
  CHECK_THROWS_AS(keyword_distance_trend(std::vector<double>{1, 2}, std::vector<std::uint32_t>{0, 1}),
                  InvalidArgument);
}

TEST_CASE("sentiment examples") {
  SentimentLexicon lex;
  lex.weights = {{"great", 1.0}, {"thanks", 1.0}, {"good", 1.0}};
  CHECK(sentence_sentiment("", lex).score == 0.0);
  CHECK(sentence_sentiment("", lex).polarity == Polarity::neutral);
  const auto s = sentence_sentiment("great work thanks", lex);
  CHECK(s.score == 2.0);
  CHECK(s.polarity == Polarity::positive);
  const auto n = sentence_sentiment("not-good job", lex);
  CHECK(n.score == -1.0);
  CHECK(n.polarity == Polarity::negative);
  // Unmerged text merges "not" itself.
  CHECK(sentence_sentiment("this is not good", lex).score == -1.0);
  lex.negation = false;
  CHECK(sentence_sentiment("not-good job", lex).score == 0.0);
  // Lexicon entries for the merged form win.
  lex.negation = true;
  lex.weights["not-bad"] = 0.5;
  CHECK(sentence_sentiment("not bad", lex).score == 0.5);
}

TEST_CASE("lexicon file") {
  std::ifstream in(std::string(HOMOPHILY_DATA_DIR) + "/lexicon_demo.tsv");
  const auto lex = load_lexicon(in);
  CHECK(lex.weights.at("great") == 0.8);
  CHECK(lex.weights.at("broken") == -0.7);
  std::istringstream bad("good 1\n");
  CHECK_THROWS_AS(load_lexicon(bad), ParseError);
  std::istringstream out_of_range("good\t2\n");
  CHECK_THROWS_AS(load_lexicon(out_of_range), ParseError);
  std::istringstream junk("good\tvery\n");
  CHECK_THROWS_AS(load_lexicon(junk), ParseError);
  std::istringstream upper("# c\nGood\t0.5\n");
  CHECK(load_lexicon(upper).weights.at("good") == 0.5);
}

TEST_CASE("sentence splitting") {
  CHECK(split_sentences("One. Two? Three!") == std::vector<std::string>{"One.", "Two?", "Three!"});
  CHECK(split_sentences("Version 2.0 is out. Yes...") == std::vector<std::string>{"Version 2.0 is out.", "Yes..."});
  CHECK(split_sentences("") .empty());
  CHECK(split_sentences("no end") == std::vector<std::string>{"no end"});
}

TEST_CASE("planted-lexicon polarity counts") {
  SentimentLexicon lex;
  lex.weights = {{"good", 1.0}, {"bad", -1.0}, {"great", 0.5}};
  // Hand counts per distance, rows negative / neutral / positive:
  //   d=0: "good." +, "bad bad good." -, "meh." 0, "great work." +   -> 1, 1, 2
  //   d=2: "not good." -, "good bad." 0                               -> 1, 1, 0
  //   d=5: "not bad!" +, "great? really bad." mixed sentences: + then -  -> 1, 0, 2
  std::vector<CommentArtifact> corpus = {
      {"good. bad bad good.", "u1", "o", ArtifactKind::comment, 0},
      {"meh. great work", "u2", "o", ArtifactKind::comment, 0},
      {"it is not good", "u3", "o", ArtifactKind::body, 2},
      {"good bad", "u4", "o", ArtifactKind::comment, 2},
      {"not bad!", "u5", "o", ArtifactKind::comment, 5},
      {"great? really bad.", "u6", "o", ArtifactKind::comment, 5},
      {"good good good", "o", "o", ArtifactKind::comment, 5},       // owner's own text
      {"bad", "u7", "o", ArtifactKind::comment, std::nullopt},       // no distance
  };
  const auto prepared_corpus = prepare_corpus(corpus, TokenRules::defaults(), MiningConfig::defaults());
  const auto t = polarity_by_distance(prepared_corpus, lex);
  CHECK(t.distances == std::vector<std::uint32_t>{0, 2, 5});
  CHECK(t.counts[0] == std::vector<std::uint64_t>{1, 1, 1});
  CHECK(t.counts[1] == std::vector<std::uint64_t>{1, 1, 0});
  CHECK(t.counts[2] == std::vector<std::uint64_t>{2, 0, 2});
  CHECK(t.sentences == 9);
  std::uint64_t total = 0;
  for (const auto& row : t.counts)
    for (auto c : row) total += c;
  CHECK(total == t.sentences);
}

TEST_CASE("polarity and similarity chi-square plumbing") {
  const auto r = stats::chi_square_independence({{20, 0}, {0, 20}});
  CHECK(r.statistic == doctest::Approx(40.0));
  CHECK(r.dof == 1);
}

}  // TEST_SUITE
