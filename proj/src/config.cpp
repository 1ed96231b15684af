#include "vmirror/config.hpp"

#include <charconv>

#include <fmt/format.h>

#include "mime.hpp"
#include "vmirror/csv.hpp"
#include "vmirror/error.hpp"

namespace vmirror {
namespace {

std::vector<std::string> split_commas(std::string_view s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t next = s.find(',', pos);
    std::string item = mime::trim(s.substr(pos, next == std::string_view::npos ? s.size() - pos
                                                                               : next - pos));
    if (!item.empty()) out.push_back(std::move(item));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

template <typename T>
std::optional<T> parse_num(const std::string& s) {
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<bool> parse_bool(const std::string& s) {
  std::string v = mime::to_lower(s);
  if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
  if (v == "false" || v == "no" || v == "0" || v == "off") return false;
  return std::nullopt;
}

const ConfigKey* find_key(std::string_view name) {
  for (const auto& k : config_keys()) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

}  // namespace

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = {
      {"input", "", "required; comma-separated mbox files or message CSVs (*.csv)"},
      {"rosters", "", "required; roster CSV team,member,creativity,presentation,content[,shared]"},
      {"aliases", "", "alias TSV raw<TAB>canonical"},
      {"dummy", "", "comma-separated collector mailbox addresses, removed from recipients"},
      {"lexicon.positive", "", "positive word list (default: built-in lexicon)"},
      {"lexicon.negative", "", "negative word list (default: built-in lexicon)"},
      {"window.step", "1", "window step in days (>= 1)"},
      {"window.lookback", "7", "window length in days (>= step)"},
      {"window.mode", "sliding", "sliding | cumulative"},
      {"window.origin", "", "first course day YYYY-MM-DD (default: day of first message)"},
      {"strong_tie", "mean", "strong-tie threshold: mean | a fixed weight >= 1"},
      {"art.cutoff_minutes", "20160", "replies slower than this are non-responses"},
      {"betweenness.directed", "false", "betweenness on the directed graph instead of symmetrized"},
      {"columns", "", "correlation columns (default: all numeric team metrics)"},
      {"output", "vmirror-out", "output directory"},
      {"figures", "true", "also write per-team surfaces, series SVGs and the contribution scatter"},
  };
  return keys;
}

std::vector<std::string> default_correlation_columns() {
  const auto& all = team_metrics_columns();
  return {all.begin() + 1, all.end()};
}

RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir,
                       const std::vector<std::string>& overrides) {
  std::vector<std::string> errors;
  std::map<std::string, std::string> values;

  auto assign = [&](std::string key, std::string value, const std::string& where, bool replace) {
    if (!find_key(key)) {
      errors.push_back(fmt::format("{}: unknown key '{}'", where, key));
      return;
    }
    if (!replace && values.count(key)) {
      errors.push_back(fmt::format("{}: duplicate key '{}'", where, key));
      return;
    }
    values[std::move(key)] = std::move(value);
  };

  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string line = mime::trim(
        text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos));
    pos = eol == std::string_view::npos ? text.size() : eol + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back(fmt::format("line {}: expected key = value", line_no));
      continue;
    }
    assign(mime::trim(line.substr(0, eq)), mime::trim(line.substr(eq + 1)),
           fmt::format("line {}", line_no), false);
  }
  for (const auto& o : overrides) {
    std::size_t eq = o.find('=');
    if (eq == std::string::npos) {
      errors.push_back(fmt::format("override '{}': expected key=value", o));
      continue;
    }
    assign(mime::trim(o.substr(0, eq)), mime::trim(o.substr(eq + 1)),
           fmt::format("override '{}'", o), true);
  }
  for (const auto& k : config_keys()) {
    if (!values.count(std::string(k.name)) && !k.default_value.empty()) {
      values[std::string(k.name)] = std::string(k.default_value);
    }
  }

  RunConfig cfg;
  cfg.echo = values;
  auto get = [&](std::string_view key) -> std::optional<std::string> {
    auto it = values.find(std::string(key));
    if (it == values.end() || it->second.empty()) return std::nullopt;
    return it->second;
  };
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };
  auto existing = [&](std::string_view key, const std::string& p) {
    auto path = resolve(p);
    if (!std::filesystem::is_regular_file(path)) {
      errors.push_back(fmt::format("{}: file not found: {}", key, path.string()));
    }
    return path;
  };

  if (auto v = get("input")) {
    for (const auto& p : split_commas(*v)) cfg.inputs.push_back(existing("input", p));
  }
  if (cfg.inputs.empty()) errors.push_back("input: required");
  if (auto v = get("rosters")) {
    cfg.rosters = existing("rosters", *v);
  } else {
    errors.push_back("rosters: required");
  }
  if (auto v = get("aliases")) cfg.aliases = existing("aliases", *v);
  if (auto v = get("dummy")) cfg.dummy_addresses = split_commas(*v);

  auto pos_lex = get("lexicon.positive");
  auto neg_lex = get("lexicon.negative");
  if (pos_lex.has_value() != neg_lex.has_value()) {
    errors.push_back("lexicon.positive and lexicon.negative must be given together");
  } else if (pos_lex) {
    cfg.lexicon_positive = existing("lexicon.positive", *pos_lex);
    cfg.lexicon_negative = existing("lexicon.negative", *neg_lex);
  }

  auto& window = cfg.metrics.window;
  if (auto step = parse_num<int>(*get("window.step")); step && *step >= 1) {
    window.step_days = *step;
  } else {
    errors.push_back("window.step: expected an integer >= 1");
  }
  if (auto lb = parse_num<int>(*get("window.lookback")); lb && *lb >= window.step_days) {
    window.lookback_days = *lb;
  } else {
    errors.push_back("window.lookback: expected an integer >= window.step");
  }
  if (auto mode = *get("window.mode"); mode == "sliding") {
    window.mode = WindowMode::sliding;
  } else if (mode == "cumulative") {
    window.mode = WindowMode::cumulative;
  } else {
    errors.push_back("window.mode: expected sliding or cumulative");
  }
  if (auto v = get("window.origin")) {
    auto t = parse_iso8601(*v);
    if (!t) {
      errors.push_back("window.origin: expected YYYY-MM-DD");
    } else {
      window.origin_day = day_number(t->time);
    }
  }

  if (auto v = *get("strong_tie"); v == "mean") {
    cfg.metrics.strong_tie = {StrongTieThreshold::Mode::mean, 1.0};
  } else if (auto k = parse_num<double>(v); k && *k >= 1.0) {
    cfg.metrics.strong_tie = {StrongTieThreshold::Mode::fixed, *k};
  } else {
    errors.push_back("strong_tie: expected 'mean' or a number >= 1");
  }
  if (auto c = parse_num<double>(*get("art.cutoff_minutes")); c && *c > 0) {
    cfg.metrics.art_cutoff_minutes = *c;
  } else {
    errors.push_back("art.cutoff_minutes: expected a number > 0");
  }
  if (auto d = parse_bool(*get("betweenness.directed"))) {
    cfg.metrics.directed = *d;
  } else {
    errors.push_back("betweenness.directed: expected true or false");
  }
  if (auto f = parse_bool(*get("figures"))) {
    cfg.figures = *f;
  } else {
    errors.push_back("figures: expected true or false");
  }

  if (auto v = get("columns")) {
    for (const auto& c : split_commas(*v)) {
      auto canon = canonical_column(c);
      if (!canon || *canon == "team") {
        errors.push_back(fmt::format("columns: unknown column '{}'", c));
      } else {
        cfg.columns.push_back(*canon);
      }
    }
    if (cfg.columns.size() < 2) errors.push_back("columns: need >= 2 columns");
  } else {
    cfg.columns = default_correlation_columns();
  }
  cfg.output_dir = resolve(*get("output"));

  if (!errors.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ConfigError(msg);
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path,
                      const std::vector<std::string>& overrides) {
  if (!std::filesystem::is_regular_file(path)) {
    throw ConfigError("config file not found: " + path.string());
  }
  return parse_config(csv::read_file(path.string()), path.parent_path(), overrides);
}

}  // namespace vmirror
