#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "vmirror/ingest.hpp"

namespace vmirror {

/// Positive and negative mood words, lowercase. Construction validates
/// that both sets are non-empty and disjoint (ConfigError otherwise).
class SentimentLexicon {
 public:
  SentimentLexicon(std::unordered_set<std::string> positive,
                   std::unordered_set<std::string> negative);

  /// Word-list files: one word per line, `#` comments and blank lines skipped.
  static SentimentLexicon from_files(const std::string& positive_path,
                                     const std::string& negative_path);
  static SentimentLexicon from_text(std::string_view positive, std::string_view negative);
  /// The compiled-in general-purpose opinion lexicon.
  static const SentimentLexicon& builtin();

  bool is_positive(std::string_view w) const { return positive_.count(std::string(w)) != 0; }
  bool is_negative(std::string_view w) const { return negative_.count(std::string(w)) != 0; }
  std::size_t positive_size() const { return positive_.size(); }
  std::size_t negative_size() const { return negative_.size(); }

 private:
  std::unordered_set<std::string> positive_;
  std::unordered_set<std::string> negative_;
};

struct SentimentScore {
  double pos = 0.0;  // percent of tokens
  double neg = 0.0;
};

struct TeamSentiment {
  double pos = 0.0;
  double neg = 0.0;
  double emotionality = 0.0;  // pos + neg
  std::size_t messages = 0;
};

/// Drops quoted lines (leading '>') and everything after a "-- " signature
/// separator.
std::string strip_quotes_and_signature(std::string_view body);

/// Lowercase maximal runs of letters; bytes >= 0x80 count as letters so
/// UTF-8 words stay whole.
std::vector<std::string> tokenize(std::string_view text);

/// Hits per 100 tokens after quote/signature stripping; (0,0) for no tokens.
SentimentScore sentiment_score(std::string_view body, const SentimentLexicon& lex);

/// Equal-weight mean over the team's tagged messages. Throws MetricError
/// when the team has no messages.
TeamSentiment team_sentiment(const MessageSet& ms, const TeamId& team,
                             const SentimentLexicon& lex);

}  // namespace vmirror
