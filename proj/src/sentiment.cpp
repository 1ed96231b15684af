#include "vmirror/sentiment.hpp"

#include <cctype>

#include "mime.hpp"
#include "vmirror/csv.hpp"
#include "vmirror/error.hpp"

namespace vmirror {
namespace detail {
extern const std::string_view kDefaultPositiveWords;
extern const std::string_view kDefaultNegativeWords;
}  // namespace detail

namespace {

std::unordered_set<std::string> read_words(std::string_view text) {
  std::unordered_set<std::string> words;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string line = mime::trim(
        text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos));
    pos = eol == std::string_view::npos ? text.size() : eol + 1;
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    words.insert(mime::to_lower(line));
  }
  return words;
}

bool is_word_byte(unsigned char c) { return std::isalpha(c) || c >= 0x80; }

}  // namespace

SentimentLexicon::SentimentLexicon(std::unordered_set<std::string> positive,
                                   std::unordered_set<std::string> negative)
    : positive_(std::move(positive)), negative_(std::move(negative)) {
  if (positive_.empty() || negative_.empty()) {
    throw ConfigError("sentiment lexicon: positive and negative lists must be non-empty");
  }
  for (const auto& w : positive_) {
    if (negative_.count(w)) throw ConfigError("sentiment lexicon: '" + w + "' is in both lists");
  }
}

SentimentLexicon SentimentLexicon::from_text(std::string_view positive,
                                             std::string_view negative) {
  return SentimentLexicon(read_words(positive), read_words(negative));
}

SentimentLexicon SentimentLexicon::from_files(const std::string& positive_path,
                                              const std::string& negative_path) {
  return from_text(csv::read_file(positive_path), csv::read_file(negative_path));
}

const SentimentLexicon& SentimentLexicon::builtin() {
  static const SentimentLexicon lex =
      from_text(detail::kDefaultPositiveWords, detail::kDefaultNegativeWords);
  return lex;
}

std::string strip_quotes_and_signature(std::string_view body) {
  std::string out;
  std::size_t pos = 0;
  while (pos < body.size()) {
    std::size_t eol = body.find('\n', pos);
    std::string_view line =
        body.substr(pos, eol == std::string_view::npos ? body.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? body.size() : eol + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line == "-- " || line == "--") break;
    std::size_t first = line.find_first_not_of(" \t");
    if (first != std::string_view::npos && line[first] == '>') continue;
    out += line;
    out += '\n';
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : text) {
    auto c = static_cast<unsigned char>(ch);
    if (is_word_byte(c)) {
      current += static_cast<char>(std::tolower(c));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

SentimentScore sentiment_score(std::string_view body, const SentimentLexicon& lex) {
  const auto tokens = tokenize(strip_quotes_and_signature(body));
  if (tokens.empty()) return {};
  std::size_t pos = 0, neg = 0;
  for (const auto& t : tokens) {
    if (lex.is_positive(t)) ++pos;
    else if (lex.is_negative(t)) ++neg;
  }
  const double n = static_cast<double>(tokens.size());
  return {100.0 * static_cast<double>(pos) / n, 100.0 * static_cast<double>(neg) / n};
}

TeamSentiment team_sentiment(const MessageSet& ms, const TeamId& team,
                             const SentimentLexicon& lex) {
  TeamSentiment out;
  for (const auto& m : ms.messages()) {
    if (m.team != team) continue;
    auto s = sentiment_score(m.body, lex);
    out.pos += s.pos;
    out.neg += s.neg;
    ++out.messages;
  }
  if (out.messages == 0) throw MetricError("no messages for team " + team);
  out.pos /= static_cast<double>(out.messages);
  out.neg /= static_cast<double>(out.messages);
  out.emotionality = out.pos + out.neg;
  return out;
}

}  // namespace vmirror
