#include "homophily/textmine.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "homophily/csv.hpp"
#include "homophily/error.hpp"
#include "homophily/porter.hpp"

namespace homophily::text {

namespace {

constexpr std::string_view kRightQuote = "\xE2\x80\x99";  // U+2019

bool is_ascii_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string replace_all(std::string s, std::string_view from, std::string_view to) {
  for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size()) {
    s.replace(pos, from.size(), to);
  }
  return s;
}

const std::regex& compiled_icase(const std::string& pattern) {
  thread_local std::unordered_map<std::string, std::regex> cache;
  auto it = cache.find(pattern);
  if (it == cache.end()) {
    it = cache.emplace(pattern, std::regex(pattern, std::regex::ECMAScript | std::regex::icase)).first;
  }
  return it->second;
}

// ---- code ------------------------------------------------------------------

std::string replace_code(std::string s) {
  static const std::regex fenced(R"(```[\s\S]*?```)");
  static const std::regex open_fence(R"(```[\s\S]*$)");
  static const std::regex inline_code(R"(`[^`\n]+`)");
  s = std::regex_replace(s, fenced, "[code-snippet]");
  s = std::regex_replace(s, open_fence, "[code-snippet]");
  s = std::regex_replace(s, inline_code, "[code-snippet]");
  return s;
}

// ---- urls ------------------------------------------------------------------

bool host_is(const std::string& host, std::string_view domain) {
  return host == domain ||
         (host.size() > domain.size() && host.ends_with(domain) && host[host.size() - domain.size() - 1] == '.');
}

std::optional<std::string> platform_token(const std::string& url) {
  std::string rest = lower(url);
  if (auto p = rest.find("://"); p != std::string::npos) rest = rest.substr(p + 3);
  auto host = rest.substr(0, rest.find_first_of("/?#:"));
  if (host.starts_with("www.")) host = host.substr(4);
  if (host_is(host, "github.com") || host_is(host, "github.io") || host_is(host, "githubusercontent.com")) {
    return "[github-link]";
  }
  if (host_is(host, "twitter.com") || host == "t.co" || host == "x.com") return "[twitter-link]";
  if (host_is(host, "stackoverflow.com")) return "[stackover-link]";
  return std::nullopt;
}

std::string replace_urls(const std::string& s) {
  static const std::regex url(R"((https?://|www\.)[^\s<>()\[\]"']+)", std::regex::ECMAScript | std::regex::icase);
  std::string out;
  auto last = s.cbegin();
  for (std::sregex_iterator it(s.begin(), s.end(), url), end; it != end; ++it) {
    const auto& m = *it;
    out.append(last, m[0].first);
    std::string found = m.str();
    std::string trailing;
    while (!found.empty() && std::string_view(".,;:!?").find(found.back()) != std::string_view::npos) {
      trailing.insert(trailing.begin(), found.back());
      found.pop_back();
    }
    if (auto token = platform_token(found)) out += *token;
    else out += found;
    out += trailing;
    last = m[0].second;
  }
  out.append(last, s.cend());
  return out;
}

// ---- mentions and repository names ----------------------------------------

std::string replace_mentions(const std::string& s) {
  static const std::regex mention(R"((^|[^A-Za-z0-9_\-/.@\[`])@[A-Za-z0-9][A-Za-z0-9-]*)");
  return std::regex_replace(s, mention, "$1[user-mention]");
}

bool has_alpha(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; });
}

std::string replace_repo_token(const std::string& token, const TokenRules& rules) {
  static const std::regex repo(R"(([A-Za-z0-9][A-Za-z0-9-]*)/([A-Za-z0-9_.-]*[A-Za-z0-9_])(#[0-9]+)?)");
  if (token.find("://") != std::string::npos || token.find('[') != std::string::npos) return token;
  std::size_t b = 0, e = token.size();
  while (b < e && std::string_view("(\"'").find(token[b]) != std::string_view::npos) ++b;
  while (e > b && std::string_view(".,;:!?)\"'").find(token[e - 1]) != std::string_view::npos) --e;
  const std::string core = token.substr(b, e - b);
  std::smatch m;
  if (!std::regex_match(core, m, repo)) return token;
  const std::string owner = m[1].str(), name = m[2].str();
  if (!has_alpha(owner) || !has_alpha(name)) return token;
  if (rules.repo_exclusions.count(lower(owner + "/" + name))) return token;
  const auto lname = lower(name);
  for (const auto& ext : rules.path_extensions) {
    if (lname.ends_with(ext)) return token;
  }
  return token.substr(0, b) + "[repo-name]" + token.substr(e);
}

// ---- emoji, emoticons, slang, short forms -----------------------------------

std::string replace_emoji(const std::string& s, const TokenRules& rules) {
  auto entries = rules.emoji;
  std::stable_sort(entries.begin(), entries.end(),
                   [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    bool matched = false;
    if (static_cast<unsigned char>(s[i]) >= 0x80) {
      for (const auto& [glyph, desc] : entries) {
        if (s.compare(i, glyph.size(), glyph) == 0) {
          if (!out.empty() && !is_space(out.back())) out.push_back(' ');
          out += ":" + desc + ":";
          i += glyph.size();
          if (i < s.size() && !is_space(s[i])) out.push_back(' ');
          matched = true;
          break;
        }
      }
    }
    if (!matched) out.push_back(s[i++]);
  }
  return out;
}

std::string apply_case(const std::string& original, std::string expansion) {
  if (!original.empty() && std::isupper(static_cast<unsigned char>(original[0])) && !expansion.empty()) {
    expansion[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(expansion[0])));
  }
  return expansion;
}

// Rewrites alphabetic words (apostrophes included) inside one whitespace token.
std::string rewrite_words(const std::string& token, const TokenRules& rules) {
  std::string out;
  std::size_t i = 0;
  while (i < token.size()) {
    auto word_char = [&](std::size_t p) -> std::size_t {
      if (std::isalpha(static_cast<unsigned char>(token[p]))) return 1;
      if (token[p] == '\'') return 1;
      if (token.compare(p, kRightQuote.size(), kRightQuote) == 0) return kRightQuote.size();
      return 0;
    };
    std::size_t j = i;
    while (j < token.size()) {
      const auto w = word_char(j);
      if (!w) break;
      j += w;
    }
    if (j == i) {
      out.push_back(token[i++]);
      continue;
    }
    const std::string word = token.substr(i, j - i);
    const std::string key = lower(replace_all(word, kRightQuote, "'"));
    std::optional<std::string> replacement;
    for (const auto& [form, expansion] : rules.short_forms) {
      if (key == form) {
        replacement = apply_case(word, expansion);
        break;
      }
    }
    if (!replacement && key.size() > 3 && key.ends_with("n't")) {
      replacement = word.substr(0, word.size() - (word.ends_with(kRightQuote) ? 5 : 3)) + " not";
    }
    if (!replacement) {
      for (const auto& [slang, desc] : rules.slang) {
        if (key == slang) {
          replacement = ":" + desc + ":";
          break;
        }
      }
    }
    out += replacement ? *replacement : word;
    i = j;
  }
  return out;
}

std::string rewrite_token(const std::string& token, const TokenRules& rules) {
  if (token.find("://") != std::string::npos) return token;
  if (token.size() > 2 && token.front() == ':' && token.back() == ':') return token;
  std::size_t e = token.size();
  while (e > 0 && std::string_view(".,!?").find(token[e - 1]) != std::string_view::npos) --e;
  const std::string core = token.substr(0, e);
  for (const auto& [emoticon, desc] : rules.emoticons) {
    if (core == emoticon) return ":" + desc + ":" + token.substr(e);
  }
  if (!core.empty() && core.front() == '[' && core.back() == ']') return token;
  return rewrite_words(replace_repo_token(token, rules), rules);
}

std::string join_tokens(const std::string& s, const TokenRules& rules, bool rewrite) {
  std::istringstream in(s);
  std::string out, token;
  while (in >> token) {
    if (!out.empty()) out.push_back(' ');
    out += rewrite ? rewrite_token(token, rules) : token;
  }
  return out;
}

// ---- mining ----------------------------------------------------------------

bool special_token(std::string_view t) {
  return t.size() > 2 && ((t.front() == '[' && t.back() == ']') || (t.front() == ':' && t.back() == ':'));
}

std::vector<std::string> raw_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::string word;
  auto flush = [&] {
    if (!word.empty()) out.push_back(std::move(word));
    word.clear();
  };
  for (std::size_t i = 0; i < text.size();) {
    const char c = text[i];
    if (c == '[' || c == ':') {
      const char close = c == '[' ? ']' : ':';
      std::size_t j = i + 1;
      while (j < text.size() && j - i < 48 &&
             (is_ascii_alnum(text[j]) || text[j] == '-' || text[j] == '_' || text[j] == '+')) {
        ++j;
      }
      if (j < text.size() && text[j] == close && j > i + 1) {
        const auto inner = text.substr(i + 1, j - i - 1);
        if (has_alpha(inner) || inner == "+1" || inner == "-1" || inner == "100") {
          flush();
          out.push_back(lower(text.substr(i, j - i + 1)));
          i = j + 1;
          continue;
        }
      }
      flush();
      ++i;
      continue;
    }
    if (text.compare(i, kRightQuote.size(), kRightQuote) == 0) {
      i += kRightQuote.size();  // apostrophes are dropped inside words
      continue;
    }
    const auto uc = static_cast<unsigned char>(c);
    if (is_ascii_alnum(c) || c == '-' || uc >= 0x80) {
      word.push_back(static_cast<char>(std::tolower(uc)));
    } else if (c != '\'') {
      flush();
    }
    ++i;
  }
  flush();
  return out;
}

std::string clean_word(const std::string& w) {
  std::string out;
  for (char c : w) {
    if (std::isdigit(static_cast<unsigned char>(c))) continue;
    if (c == '-' && (out.empty() || out.back() == '-')) continue;
    out.push_back(c);
  }
  while (!out.empty() && out.back() == '-') out.pop_back();
  return out;
}

std::string stem_compound(const std::string& token) {
  std::string out;
  std::size_t start = 0;
  while (true) {
    const auto dash = token.find('-', start);
    const auto part = token.substr(start, dash == std::string::npos ? std::string::npos : dash - start);
    if (!out.empty()) out.push_back('-');
    out += (part == "not" && dash != std::string::npos && out.empty()) ? part : porter_stem(part);
    if (dash == std::string::npos) break;
    start = dash + 1;
  }
  return out;
}

// Sentiment tokens: lowercase words and special tokens, "not" merged.
std::vector<std::string> sentiment_tokens(std::string_view text) {
  auto tokens = raw_tokens(text);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] == "not" && i + 1 < tokens.size() && !special_token(tokens[i + 1])) {
      out.push_back("not-" + tokens[i + 1]);
      ++i;
    } else {
      out.push_back(tokens[i]);
    }
  }
  return out;
}

ArtifactKind parse_kind(const std::string& s, std::size_t line) {
  if (s == "comment") return ArtifactKind::comment;
  if (s == "body") return ArtifactKind::body;
  throw ParseError("unknown artifact kind '" + s + "'", line);
}

}  // namespace

TokenRules TokenRules::defaults() {
  TokenRules r;
  r.automated_patterns = {
      R"(^\s*(this|the) (pull request|issue|pr) (has been|was) automatically)",
      R"(this (issue|pull request) has been automatically marked as stale)",
      R"(\bcoverage (increased|decreased|remained the same)\b)",
      R"(^\s*#*\s*\[?codecov\]? report)",
      R"(thanks for your pull request\. it looks like this may be your first contribution)",
      R"(\bi am a bot\b)",
      R"(^\s*\[?(automated|auto-generated) (message|comment|response)\]?)",
      R"(^\s*(can one of the admins verify this patch|build (succeeded|failed|finished))\b)",
  };
  r.emoji = {
      {"\xF0\x9F\x91\x8D", "+1"},          {"\xF0\x9F\x91\x8E", "-1"},
      {"\xF0\x9F\x98\x84", "smile"},       {"\xF0\x9F\x98\x80", "grinning"},
      {"\xF0\x9F\x98\x83", "smiley"},      {"\xF0\x9F\x99\x82", "slightly_smiling_face"},
      {"\xF0\x9F\x98\x8A", "blush"},       {"\xF0\x9F\x98\x89", "wink"},
      {"\xF0\x9F\x98\xA2", "cry"},         {"\xF0\x9F\x98\x9E", "disappointed"},
      {"\xF0\x9F\x98\x95", "confused"},    {"\xF0\x9F\x98\x82", "joy"},
      {"\xE2\x9D\xA4\xEF\xB8\x8F", "heart"}, {"\xE2\x9D\xA4", "heart"},
      {"\xF0\x9F\x8E\x89", "tada"},        {"\xF0\x9F\x9A\x80", "rocket"},
      {"\xF0\x9F\x91\x80", "eyes"},        {"\xF0\x9F\x99\x8F", "pray"},
      {"\xF0\x9F\x92\xAF", "100"},         {"\xF0\x9F\x94\xA5", "fire"},
      {"\xF0\x9F\x90\x9B", "bug"},         {"\xE2\x9C\xA8", "sparkles"},
      {"\xF0\x9F\x98\xA1", "rage"},        {"\xF0\x9F\x91\x8F", "clap"},
  };
  r.emoticons = {
      {":)", "slightly_smiling_face"}, {":-)", "slightly_smiling_face"}, {":(", "disappointed"},
      {":-(", "disappointed"},         {":D", "smile"},                  {":-D", "smile"},
      {";)", "wink"},                  {";-)", "wink"},                  {":P", "stuck_out_tongue"},
      {":p", "stuck_out_tongue"},      {":-P", "stuck_out_tongue"},      {"<3", "heart"},
      {":'(", "cry"},                  {":O", "open_mouth"},             {":o", "open_mouth"},
      {"xD", "laughing"},              {"XD", "laughing"},               {"^_^", "blush"},
      {":/", "confused"},
  };
  r.slang = {{"lol", "laughing"}, {"lmao", "laughing"}, {"rofl", "laughing"}};
  r.short_forms = {
      {"don't", "do not"},       {"doesn't", "does not"},   {"didn't", "did not"},
      {"isn't", "is not"},       {"aren't", "are not"},     {"wasn't", "was not"},
      {"weren't", "were not"},   {"haven't", "have not"},   {"hasn't", "has not"},
      {"hadn't", "had not"},     {"won't", "will not"},     {"wouldn't", "would not"},
      {"can't", "can not"},      {"couldn't", "could not"}, {"shouldn't", "should not"},
      {"mustn't", "must not"},   {"ain't", "is not"},       {"i'm", "i am"},
      {"i've", "i have"},        {"i'll", "i will"},        {"i'd", "i would"},
      {"you're", "you are"},     {"you've", "you have"},    {"you'll", "you will"},
      {"you'd", "you would"},    {"we're", "we are"},       {"we've", "we have"},
      {"we'll", "we will"},      {"they're", "they are"},   {"they've", "they have"},
      {"they'll", "they will"},  {"it's", "it is"},         {"that's", "that is"},
      {"there's", "there is"},   {"what's", "what is"},     {"let's", "let us"},
      {"he's", "he is"},         {"she's", "she is"},       {"pls", "please"},
      {"plz", "please"},         {"thx", "thanks"},         {"imo", "in my opinion"},
      {"imho", "in my humble opinion"}, {"afaik", "as far as i know"}, {"btw", "by the way"},
      {"idk", "i do not know"},
  };
  r.repo_exclusions = {"and/or", "input/output", "i/o", "yes/no", "true/false", "on/off",
                       "read/write", "client/server", "either/or", "he/she", "his/her", "w/o"};
  r.path_extensions = {".c",  ".cc",   ".cpp", ".h",    ".hpp", ".py",  ".js",   ".ts",  ".go",
                       ".rs", ".java", ".rb",  ".md",   ".txt", ".json", ".yml", ".yaml", ".xml",
                       ".html", ".css", ".sh", ".php",  ".lock", ".toml", ".cfg", ".ini", ".log"};
  return r;
}

std::string preprocess_comment(std::string_view text, const TokenRules& rules) {
  std::string s = replace_code(std::string(text));
  for (const auto& pattern : rules.automated_patterns) {
    if (std::regex_search(s, compiled_icase(pattern))) {
      s = "[automated-message]";
      break;
    }
  }
  s = replace_urls(s);
  s = replace_mentions(s);
  s = replace_emoji(s, rules);
  // Repository names, emoticons, slang and short forms work per whitespace
  // token; rebuilding the text from tokens collapses it onto one line.
  s = join_tokens(s, rules, true);
  if (!s.empty() && std::string_view(".?!").find(s.back()) == std::string_view::npos) s.push_back('.');
  return s;
}

MiningConfig MiningConfig::defaults() {
  MiningConfig c;
  c.stop_words = {
      "a",       "about",   "above",  "after",  "again",   "against", "all",     "am",      "an",
      "and",     "any",     "are",    "as",     "at",      "be",      "because", "been",    "before",
      "being",   "below",   "between","both",   "but",     "by",      "can",     "could",   "did",
      "do",      "does",    "doing",  "down",   "during",  "each",    "few",     "for",     "from",
      "further", "had",     "has",    "have",   "having",  "he",      "her",     "here",    "hers",
      "herself", "him",     "himself","his",    "how",     "i",       "if",      "in",      "into",
      "is",      "it",      "its",    "itself", "just",    "me",      "more",    "most",    "my",
      "myself",  "no",      "nor",    "not",    "now",     "of",      "off",     "on",      "once",
      "only",    "or",      "other",  "our",    "ours",    "ourselves","out",    "over",    "own",
      "same",    "she",     "should", "so",     "some",    "such",    "than",    "that",    "the",
      "their",   "theirs",  "them",   "themselves","then", "there",   "these",   "they",    "this",
      "those",   "through", "to",     "too",    "under",   "until",   "up",      "very",    "was",
      "we",      "were",    "what",   "when",   "where",   "which",   "while",   "who",     "whom",
      "why",     "will",    "with",   "would",  "you",     "your",    "yours",   "yourself","yourselves",
  };
  return c;
}

std::vector<std::string> mining_normalize(std::string_view text, const MiningConfig& config) {
  std::vector<std::string> tokens;
  for (auto& t : raw_tokens(text)) {
    if (special_token(t)) {
      tokens.push_back(std::move(t));
      continue;
    }
    auto w = clean_word(t);
    if (!w.empty()) tokens.push_back(std::move(w));
  }
  std::vector<std::string> merged;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] == "not" && i + 1 < tokens.size() && !special_token(tokens[i + 1])) {
      merged.push_back("not-" + tokens[i + 1]);
      ++i;
    } else {
      merged.push_back(std::move(tokens[i]));
    }
  }
  std::vector<std::string> out;
  for (auto& t : merged) {
    if (special_token(t)) {
      out.push_back(std::move(t));
      continue;
    }
    if (config.stop_words.count(t)) continue;
    out.push_back(config.stem ? stem_compound(t) : std::move(t));
  }
  return out;
}

std::string normalize_keyword(std::string_view keyword, const MiningConfig& config) {
  const auto k = lower(csv::trim(keyword));
  if (special_token(k) || !config.stem) return k;
  return stem_compound(k);
}

std::vector<CommentArtifact> load_corpus(std::istream& in) {
  std::vector<CommentArtifact> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (csv::trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      CommentArtifact a;
      a.author = j.at("author").get<std::string>();
      a.owner = j.at("owner").get<std::string>();
      a.kind = parse_kind(j.value("kind", std::string("comment")), line_no);
      a.text = j.at("text").get<std::string>();
      if (j.contains("distance") && !j["distance"].is_null()) a.distance = j["distance"].get<std::uint32_t>();
      out.push_back(std::move(a));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("corpus record: ") + e.what(), line_no);
    }
  }
  return out;
}

void write_corpus(std::ostream& out, std::span<const CommentArtifact> corpus) {
  for (const auto& a : corpus) {
    nlohmann::json j;
    j["author"] = a.author;
    j["owner"] = a.owner;
    j["kind"] = a.kind == ArtifactKind::comment ? "comment" : "body";
    j["text"] = a.text;
    j["distance"] = a.distance ? nlohmann::json(*a.distance) : nlohmann::json(nullptr);
    out << j.dump() << "\n";
  }
}

std::vector<PreparedArtifact> prepare_corpus(std::span<const CommentArtifact> corpus, const TokenRules& rules,
                                             const MiningConfig& mining) {
  std::vector<PreparedArtifact> out;
  for (const auto& a : corpus) {
    if (!a.analyzable()) continue;
    PreparedArtifact p;
    p.distance = *a.distance;
    p.kind = a.kind;
    p.normalized = preprocess_comment(a.text, rules);
    p.tokens = mining_normalize(p.normalized, mining);
    out.push_back(std::move(p));
  }
  return out;
}

std::string_view to_string(FrequencyUnit unit) {
  return unit == FrequencyUnit::per_100_artifacts ? "per_100_artifacts" : "per_1000_tokens";
}

FrequencyTable keyword_frequency_by_distance(std::span<const PreparedArtifact> corpus,
                                             const std::vector<std::string>& keywords, FrequencyUnit unit,
                                             const MiningConfig& mining) {
  if (corpus.empty()) throw InvalidArgument("keyword frequency of an empty corpus");
  FrequencyTable t;
  t.unit = unit;
  t.keywords = keywords;
  std::map<std::uint32_t, std::size_t> bin_of;
  for (const auto& a : corpus) bin_of.emplace(a.distance, 0);
  for (auto& [d, bin] : bin_of) {
    bin = t.distances.size();
    t.distances.push_back(d);
  }
  const auto bins = t.distances.size();
  t.artifacts.assign(bins, 0);
  t.tokens.assign(bins, 0);
  std::vector<std::string> keys;
  for (const auto& k : keywords) keys.push_back(normalize_keyword(k, mining));
  std::vector<std::vector<std::uint64_t>> hits(keys.size(), std::vector<std::uint64_t>(bins, 0));
  for (const auto& a : corpus) {
    const auto bin = bin_of[a.distance];
    ++t.artifacts[bin];
    t.tokens[bin] += a.tokens.size();
    for (std::size_t k = 0; k < keys.size(); ++k) {
      const auto n = static_cast<std::uint64_t>(std::count(a.tokens.begin(), a.tokens.end(), keys[k]));
      hits[k][bin] += unit == FrequencyUnit::per_100_artifacts ? (n > 0 ? 1 : 0) : n;
    }
  }
  t.frequency.assign(keys.size(), std::vector<double>(bins, 0.0));
  for (std::size_t k = 0; k < keys.size(); ++k) {
    for (std::size_t b = 0; b < bins; ++b) {
      const double denom = unit == FrequencyUnit::per_100_artifacts ? static_cast<double>(t.artifacts[b])
                                                                     : static_cast<double>(t.tokens[b]);
      const double scale = unit == FrequencyUnit::per_100_artifacts ? 100.0 : 1000.0;
      t.frequency[k][b] = denom > 0.0 ? scale * static_cast<double>(hits[k][b]) / denom : 0.0;
    }
  }
  return t;
}

stats::CorrelationResult keyword_distance_trend(std::span<const double> row,
                                                std::span<const std::uint32_t> distances) {
  if (row.size() != distances.size()) throw InvalidArgument("trend row and distances differ in length");
  if (row.size() < 3) throw InvalidArgument("trend needs at least 3 distance bins");
  std::vector<double> d(distances.begin(), distances.end());
  return stats::spearman(d, row);
}

SentimentLexicon load_lexicon(std::istream& in) {
  SentimentLexicon lex;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = csv::trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError("expected term<TAB>weight", line_no);
    const auto term = lower(csv::trim(std::string_view(line).substr(0, tab)));
    const auto weight_text = std::string(csv::trim(std::string_view(line).substr(tab + 1)));
    double w = 0.0;
    try {
      std::size_t used = 0;
      w = std::stod(weight_text, &used);
      if (used != weight_text.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError("bad lexicon weight '" + weight_text + "'", line_no);
    }
    if (term.empty()) throw ParseError("empty lexicon term", line_no);
    if (w < -1.0 || w > 1.0) throw ParseError("lexicon weight outside [-1, 1]", line_no);
    lex.weights[term] = w;
  }
  return lex;
}

std::string_view to_string(Polarity p) {
  switch (p) {
    case Polarity::negative: return "negative";
    case Polarity::positive: return "positive";
    case Polarity::neutral: break;
  }
  return "neutral";
}

SentimentScore sentence_sentiment(std::string_view sentence, const SentimentLexicon& lexicon) {
  SentimentScore s;
  for (const auto& t : sentiment_tokens(sentence)) {
    if (auto it = lexicon.weights.find(t); it != lexicon.weights.end()) {
      s.score += it->second;
    } else if (lexicon.negation && t.starts_with("not-")) {
      if (auto neg = lexicon.weights.find(t.substr(4)); neg != lexicon.weights.end()) s.score -= neg->second;
    }
  }
  s.polarity = s.score > 0.0 ? Polarity::positive : s.score < 0.0 ? Polarity::negative : Polarity::neutral;
  return s;
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (std::string_view(".?!").find(text[i]) == std::string_view::npos) continue;
    std::size_t j = i;
    while (j + 1 < text.size() && std::string_view(".?!").find(text[j + 1]) != std::string_view::npos) ++j;
    if (j + 1 == text.size() || is_space(text[j + 1])) {
      const auto s = csv::trim(text.substr(start, j + 1 - start));
      if (!s.empty()) out.emplace_back(s);
      start = j + 1;
    }
    i = j;
  }
  const auto tail = csv::trim(text.substr(std::min(start, text.size())));
  if (!tail.empty()) out.emplace_back(tail);
  return out;
}

PolarityTable polarity_by_distance(std::span<const PreparedArtifact> corpus, const SentimentLexicon& lexicon) {
  PolarityTable t;
  std::map<std::uint32_t, std::size_t> bin_of;
  for (const auto& a : corpus) bin_of.emplace(a.distance, 0);
  for (auto& [d, bin] : bin_of) {
    bin = t.distances.size();
    t.distances.push_back(d);
  }
  t.counts.assign(3, std::vector<std::uint64_t>(t.distances.size(), 0));
  for (const auto& a : corpus) {
    const auto bin = bin_of[a.distance];
    for (const auto& sentence : split_sentences(a.normalized)) {
      ++t.counts[static_cast<std::size_t>(sentence_sentiment(sentence, lexicon).polarity)][bin];
      ++t.sentences;
    }
  }
  return t;
}

}  // namespace homophily::text
