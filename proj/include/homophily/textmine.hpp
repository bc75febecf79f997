#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "homophily/stats.hpp"

namespace homophily::text {

// Rewrite rules for development-discussion text, applied in this order:
// code -> [code-snippet], automated responses -> [automated-message],
// platform URLs -> [github-link] / [twitter-link] / [stackover-link],
// @name -> [user-mention], owner/repo -> [repo-name], emoji, emoticons and
// slang -> :description:, short forms expanded, whitespace collapsed to one
// line, '.' appended unless the text ends in . ? or !.
struct TokenRules {
  /// ECMAScript regexes (case-insensitive); a match anywhere marks the whole
  /// comment as automated.
  std::vector<std::string> automated_patterns;
  /// UTF-8 emoji -> description without colons.
  std::vector<std::pair<std::string, std::string>> emoji;
  /// Whitespace-delimited emoticons -> description.
  std::vector<std::pair<std::string, std::string>> emoticons;
  /// Lowercase slang words -> description.
  std::vector<std::pair<std::string, std::string>> slang;
  /// Lowercase contraction -> expansion. Apostrophes are matched as ' or U+2019.
  std::vector<std::pair<std::string, std::string>> short_forms;
  /// Lowercase a/b words never treated as repository names.
  std::set<std::string> repo_exclusions;
  /// A second segment ending in one of these is a file path, not a repository.
  std::vector<std::string> path_extensions;

  static TokenRules defaults();
};

std::string preprocess_comment(std::string_view text, const TokenRules& rules = TokenRules::defaults());

struct MiningConfig {
  std::set<std::string> stop_words;
  bool stem = true;

  /// Bundled English stop list ("not" is merged before stop-word removal).
  static MiningConfig defaults();
};

/// Lowercase, merge "not" with the next word, drop numbers and punctuation,
/// remove stop words, Porter-stem. [bracketed] and :emoji: tokens pass
/// through untouched.
std::vector<std::string> mining_normalize(std::string_view text,
                                          const MiningConfig& config = MiningConfig::defaults());

/// Keyword as it appears in mined token lists (stemmed the same way).
std::string normalize_keyword(std::string_view keyword, const MiningConfig& config = MiningConfig::defaults());

enum class ArtifactKind { comment, body };

struct CommentArtifact {
  std::string text;
  std::string author;
  std::string owner;
  ArtifactKind kind = ArtifactKind::comment;
  std::optional<std::uint32_t> distance;

  /// Author differs from owner and a distance is known.
  bool analyzable() const { return author != owner && distance.has_value(); }
};

/// One JSON object per line: {author, owner, kind, text, distance}; distance
/// may be null or missing.
std::vector<CommentArtifact> load_corpus(std::istream& in);
void write_corpus(std::ostream& out, std::span<const CommentArtifact> corpus);

struct PreparedArtifact {
  std::uint32_t distance = 0;
  ArtifactKind kind = ArtifactKind::comment;
  std::string normalized;
  std::vector<std::string> tokens;
};

/// Preprocesses and mines every analyzable artifact; others are dropped.
std::vector<PreparedArtifact> prepare_corpus(std::span<const CommentArtifact> corpus, const TokenRules& rules,
                                             const MiningConfig& mining);

enum class FrequencyUnit { per_100_artifacts, per_1000_tokens };

std::string_view to_string(FrequencyUnit unit);

struct FrequencyTable {
  FrequencyUnit unit = FrequencyUnit::per_100_artifacts;
  /// Distance bins holding at least one artifact, ascending.
  std::vector<std::uint32_t> distances;
  std::vector<std::size_t> artifacts;
  std::vector<std::size_t> tokens;
  std::vector<std::string> keywords;
  /// frequency[keyword][bin]
  std::vector<std::vector<double>> frequency;
};

/// per_100_artifacts: share of a bin's artifacts containing the keyword
/// times 100; per_1000_tokens: occurrences per 1000 mined tokens. Throws
/// InvalidArgument on an empty corpus.
FrequencyTable keyword_frequency_by_distance(std::span<const PreparedArtifact> corpus,
                                             const std::vector<std::string>& keywords, FrequencyUnit unit,
                                             const MiningConfig& mining = MiningConfig::defaults());

/// Spearman correlation of a frequency row against its distances (>= 3 bins).
stats::CorrelationResult keyword_distance_trend(std::span<const double> row,
                                                std::span<const std::uint32_t> distances);

struct SentimentLexicon {
  /// Lowercase term -> weight in [-1, 1].
  std::unordered_map<std::string, double> weights;
  /// "not-x" scores as -weight(x).
  bool negation = true;
};

/// "term<TAB>weight" lines; '#' comments. Throws ParseError on bad lines or
/// weights outside [-1, 1].
SentimentLexicon load_lexicon(std::istream& in);

enum class Polarity { negative, neutral, positive };

std::string_view to_string(Polarity p);

struct SentimentScore {
  double score = 0.0;
  Polarity polarity = Polarity::neutral;
};

SentimentScore sentence_sentiment(std::string_view sentence, const SentimentLexicon& lexicon);

/// Splits normalised text after runs of . ? ! followed by whitespace or the end.
std::vector<std::string> split_sentences(std::string_view text);

struct PolarityTable {
  std::vector<std::uint32_t> distances;
  /// counts[polarity][bin], rows ordered negative, neutral, positive.
  std::vector<std::vector<std::uint64_t>> counts;
  std::uint64_t sentences = 0;
};

PolarityTable polarity_by_distance(std::span<const PreparedArtifact> corpus, const SentimentLexicon& lexicon);

}  // namespace homophily::text
