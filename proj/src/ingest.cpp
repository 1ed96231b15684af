#include "vmirror/ingest.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <ostream>
#include <unordered_map>

#include <fmt/format.h>

#include "mime.hpp"
#include "vmirror/csv.hpp"
#include "vmirror/error.hpp"

namespace vmirror {
namespace {

std::uint64_t fnv1a(std::string_view data, std::uint64_t h = 1469598103934665603ULL) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string strip_trailing_whitespace(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  return s;
}

void push_unique(std::vector<ActorId>& list, ActorId a) {
  if (a.empty()) return;
  if (std::find(list.begin(), list.end(), a) == list.end()) list.push_back(std::move(a));
}

void push_unique(std::vector<std::string>& list, std::string s) {
  if (s.empty()) return;
  if (std::find(list.begin(), list.end(), s) == list.end()) list.push_back(std::move(s));
}

std::vector<ActorId> parse_address_headers(const std::vector<std::string>& values) {
  std::vector<ActorId> out;
  for (const auto& v : values) {
    for (const auto& addr : mime::split_addresses(v)) push_unique(out, ActorId(addr));
  }
  return out;
}

std::vector<std::string> split_list(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t next = s.find(sep, pos);
    std::string item = mime::trim(s.substr(pos, next == std::string_view::npos ? s.size() - pos
                                                                               : next - pos));
    if (!item.empty()) out.push_back(std::move(item));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

// Undo mboxrd quoting: one '>' is removed from lines matching ^>+From .
std::string unquote_from_lines(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos + 1);
    std::size_t gt = 0;
    while (gt < line.size() && line[gt] == '>') ++gt;
    if (gt > 0 && line.substr(gt).starts_with("From ")) line.remove_prefix(1);
    out += line;
    pos += eol == std::string_view::npos ? text.size() - pos : eol - pos + 1;
  }
  return out;
}

std::optional<Message> parse_one(std::string_view raw, std::size_t index, Diagnostics& diag) {
  std::string text = unquote_from_lines(raw);
  auto [head, body] = mime::split_head_body(text);
  mime::Headers headers = mime::parse_headers(head);
  if (headers.empty()) {
    diag.warn("empty_message", fmt::format("message #{}: no headers", index));
    return std::nullopt;
  }

  Message m;
  auto from = mime::first(headers, "from");
  if (from) {
    auto addrs = mime::split_addresses(mime::decode_encoded_words(*from));
    if (!addrs.empty()) m.sender = ActorId(addrs.front());
  }
  if (m.sender.empty()) {
    diag.warn("missing_from", fmt::format("message #{}: no From address", index));
    return std::nullopt;
  }

  auto date = mime::first(headers, "date");
  if (!date) {
    diag.warn("missing_date", fmt::format("message #{}: no Date header", index));
    return std::nullopt;
  }
  auto parsed = parse_rfc2822_date(*date);
  if (!parsed) parsed = parse_iso8601(*date);
  if (!parsed) {
    diag.warn("bad_date", fmt::format("message #{}: unparseable Date '{}'", index, *date));
    return std::nullopt;
  }
  if (!parsed->had_zone) {
    diag.warn("assumed_utc", fmt::format("message #{}: no timezone in '{}'", index, *date));
  }
  m.timestamp = parsed->time;

  m.subject = mime::decode_encoded_words(mime::first(headers, "subject").value_or(""));
  m.recipients = parse_address_headers(mime::all(headers, "to"));
  for (auto& a : parse_address_headers(mime::all(headers, "cc"))) push_unique(m.recipients, a);
  if (m.recipients.empty()) {
    diag.warn("no_recipients", fmt::format("message #{}: no To/Cc recipients", index));
  }

  for (const auto& v : mime::all(headers, "in-reply-to")) {
    for (auto& id : mime::message_ids(v)) push_unique(m.reply_parents, id);
  }
  for (const auto& v : mime::all(headers, "references")) {
    for (auto& id : mime::message_ids(v)) push_unique(m.reply_parents, id);
  }

  std::string decoded = mime::extract_text(headers, body);
  decoded.erase(std::remove(decoded.begin(), decoded.end(), '\r'), decoded.end());
  m.body = strip_trailing_whitespace(std::move(decoded));

  if (auto mid = mime::first(headers, "message-id"); mid && !mime::message_ids(*mid).empty()) {
    m.id = mime::message_ids(*mid).front();
  } else {
    std::uint64_t h = fnv1a(m.sender.str());
    h = fnv1a(*date, h);
    h = fnv1a(m.subject, h);
    h = fnv1a(m.body, h);
    m.id = fmt::format("generated-{:016x}@vmirror", h);
    diag.warn("missing_message_id", fmt::format("message #{}: assigned id {}", index, m.id));
  }
  return m;
}

void validate_rosters(const std::vector<TeamRoster>& rosters) {
  std::map<ActorId, std::vector<const TeamRoster*>> owners;
  for (const auto& r : rosters) {
    for (const auto& a : r.members) owners[a].push_back(&r);
  }
  for (const auto& [actor, teams] : owners) {
    if (teams.size() < 2) continue;
    for (const auto* t : teams) {
      if (!t->shared.count(actor)) {
        throw ConfigError(fmt::format("roster: {} belongs to several teams but is not flagged "
                                      "shared in team {}",
                                      actor.str(), t->team));
      }
    }
  }
}

}  // namespace

std::string normalize_address(std::string_view raw) {
  std::string s(raw);
  // Prefer the last <addr-spec> outside of quotes.
  std::size_t open = std::string::npos, close = std::string::npos;
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (quoted) continue;
    if (s[i] == '<') open = i;
    if (s[i] == '>' && open != std::string::npos) close = i;
  }
  if (open != std::string::npos && close != std::string::npos && close > open) {
    s = s.substr(open + 1, close - open - 1);
  } else {
    std::string stripped;
    int depth = 0;
    for (char c : s) {
      if (c == '(') ++depth;
      if (depth == 0) stripped += c;
      if (c == ')' && depth > 0) --depth;
    }
    s = stripped;
  }
  s = mime::to_lower(mime::trim(s));
  if (s.starts_with("mailto:")) s = s.substr(7);
  while (!s.empty() && (s.front() == '"' || s.front() == '\'')) s.erase(s.begin());
  while (!s.empty() && (s.back() == '"' || s.back() == '\'')) s.pop_back();
  return mime::trim(s);
}

void Diagnostics::warn(const std::string& kind, std::string detail) {
  ++counts[kind];
  details.push_back(std::move(detail));
}

std::size_t Diagnostics::total() const {
  std::size_t n = 0;
  for (const auto& [_, c] : counts) n += c;
  return n;
}

std::size_t Diagnostics::count(const std::string& kind) const {
  auto it = counts.find(kind);
  return it == counts.end() ? 0 : it->second;
}

void Diagnostics::merge(const Diagnostics& other) {
  for (const auto& [k, c] : other.counts) counts[k] += c;
  details.insert(details.end(), other.details.begin(), other.details.end());
}

MessageSet::MessageSet(std::vector<Message> messages, Diagnostics diagnostics)
    : diagnostics_(std::move(diagnostics)) {
  std::vector<Message> unique;
  unique.reserve(messages.size());
  std::set<std::string, std::less<>> seen;
  for (auto& m : messages) {
    if (!seen.insert(m.id).second) {
      diagnostics_.warn("duplicate_id", "duplicate Message-ID " + m.id + " dropped");
      continue;
    }
    unique.push_back(std::move(m));
  }
  std::stable_sort(unique.begin(), unique.end(),
                   [](const Message& a, const Message& b) { return a.timestamp < b.timestamp; });
  messages_ = std::move(unique);
  for (std::size_t i = 0; i < messages_.size(); ++i) {
    const auto& m = messages_[i];
    by_id_.emplace(m.id, i);
    actors_.insert(m.sender);
    actors_.insert(m.recipients.begin(), m.recipients.end());
  }
}

TimeSpan MessageSet::span() const {
  if (messages_.empty()) return {};
  return {messages_.front().timestamp, messages_.back().timestamp};
}

std::span<const Message> MessageSet::between(Timestamp start, Timestamp end) const {
  auto lo = std::lower_bound(messages_.begin(), messages_.end(), start,
                             [](const Message& m, Timestamp t) { return m.timestamp < t; });
  auto hi = std::lower_bound(lo, messages_.end(), end,
                             [](const Message& m, Timestamp t) { return m.timestamp < t; });
  return {lo, hi};
}

const Message* MessageSet::find(std::string_view id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &messages_[it->second];
}

void AliasMap::add(std::string_view raw, std::string_view canonical) {
  std::string from = normalize_address(raw);
  std::string to = normalize_address(canonical);
  if (from.empty() || to.empty()) throw ConfigError("alias map: empty address");
  auto [it, inserted] = map_.emplace(from, to);
  if (!inserted && it->second != to) {
    throw ConfigError(fmt::format("alias map: {} mapped to both {} and {}", from, it->second, to));
  }
}

void AliasMap::validate() const {
  for (const auto& [from, to] : map_) {
    auto next = map_.find(to);
    if (next != map_.end() && next->second != to) {
      throw ConfigError(fmt::format("alias chain: {} -> {} -> {}", from, to, next->second));
    }
  }
}

ActorId AliasMap::resolve(const ActorId& actor) const {
  auto it = map_.find(actor.str());
  return it == map_.end() ? actor : ActorId(it->second);
}

MessageSet parse_mbox_text(std::string_view text) {
  Diagnostics diag;
  std::vector<Message> messages;
  std::size_t index = 0;
  std::size_t pos = 0;
  std::size_t msg_start = std::string_view::npos;
  bool prev_blank = true;

  auto finish = [&](std::size_t end) {
    if (msg_start == std::string_view::npos) return;
    if (auto m = parse_one(text.substr(msg_start, end - msg_start), index, diag)) {
      messages.push_back(std::move(*m));
    }
    ++index;
  };

  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::size_t next = eol == std::string_view::npos ? text.size() : eol + 1;
    std::string_view line = text.substr(pos, next - pos);
    if (prev_blank && line.starts_with("From ")) {
      finish(pos);
      msg_start = next;
    }
    prev_blank = line == "\n" || line == "\r\n";
    pos = next;
  }
  finish(text.size());
  if (messages.empty() && index == 0 && !text.empty()) {
    diag.warn("not_mbox", "no 'From ' separator lines found");
  }
  return MessageSet(std::move(messages), std::move(diag));
}

MessageSet parse_mbox(const std::string& path) { return parse_mbox_text(csv::read_file(path)); }

MessageSet parse_message_csv_text(std::string_view text) {
  auto rows = csv::parse(text);
  if (rows.empty()) throw InputError("message CSV: empty file");
  const auto& header = rows.front();
  static constexpr std::array<std::string_view, 7> kColumns = {
      "id", "sender", "recipients", "timestamp", "subject", "reply_parents", "body"};
  std::array<int, 7> col{};
  for (std::size_t i = 0; i < kColumns.size(); ++i) {
    col[i] = csv::column_index(header, kColumns[i]);
    if (col[i] < 0) throw InputError(fmt::format("missing column: {}", kColumns[i]));
  }
  int team_col = csv::column_index(header, "team");

  Diagnostics diag;
  std::vector<Message> messages;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() < header.size()) {
      diag.warn("bad_row", fmt::format("CSV row {}: {} fields, expected {}", r + 1, row.size(),
                                       header.size()));
      continue;
    }
    Message m;
    m.id = row[col[0]];
    m.sender = ActorId(row[col[1]]);
    if (m.id.empty() || m.sender.empty()) {
      diag.warn("bad_row", fmt::format("CSV row {}: empty id or sender", r + 1));
      continue;
    }
    for (auto& a : split_list(row[col[2]], ';')) push_unique(m.recipients, ActorId(a));
    auto ts = parse_iso8601(row[col[3]]);
    if (!ts) {
      diag.warn("bad_date", fmt::format("CSV row {}: unparseable timestamp '{}'", r + 1,
                                        row[col[3]]));
      continue;
    }
    if (!ts->had_zone) {
      diag.warn("assumed_utc", fmt::format("CSV row {}: no timezone", r + 1));
    }
    m.timestamp = ts->time;
    m.subject = row[col[4]];
    m.reply_parents = split_list(row[col[5]], ';');
    m.body = row[col[6]];
    if (team_col >= 0 && !row[team_col].empty()) m.team = row[team_col];
    if (m.recipients.empty()) {
      diag.warn("no_recipients", fmt::format("CSV row {}: no recipients", r + 1));
    }
    messages.push_back(std::move(m));
  }
  return MessageSet(std::move(messages), std::move(diag));
}

MessageSet parse_message_csv(const std::string& path) {
  return parse_message_csv_text(csv::read_file(path));
}

void write_message_csv(const MessageSet& ms, std::ostream& out) {
  csv::write_row(out, {"id", "sender", "recipients", "timestamp", "subject", "reply_parents",
                       "body"});
  for (const auto& m : ms.messages()) {
    std::string recipients;
    for (const auto& r : m.recipients) {
      if (!recipients.empty()) recipients += ';';
      recipients += r.str();
    }
    std::string parents;
    for (const auto& p : m.reply_parents) {
      if (!parents.empty()) parents += ';';
      parents += p;
    }
    csv::write_row(out, {m.id, m.sender.str(), recipients, format_iso8601(m.timestamp), m.subject,
                         parents, m.body});
  }
}

AliasMap parse_alias_tsv(std::string_view text) {
  AliasMap aliases;
  std::size_t line_no = 0;
  for (const auto& row : csv::parse(text, '\t')) {
    ++line_no;
    if (row.empty() || (row.size() == 1 && mime::trim(row[0]).empty())) continue;
    if (mime::trim(row[0]).starts_with("#")) continue;
    if (row.size() != 2) {
      throw ConfigError(fmt::format("alias map line {}: expected raw<TAB>canonical", line_no));
    }
    aliases.add(row[0], row[1]);
  }
  aliases.validate();
  return aliases;
}

AliasMap load_aliases(const std::string& path) { return parse_alias_tsv(csv::read_file(path)); }

std::vector<TeamRoster> parse_rosters_csv(std::string_view text) {
  auto rows = csv::parse(text);
  if (rows.empty()) throw ConfigError("roster: empty file");
  const auto& header = rows.front();
  auto require = [&](std::string_view name) {
    int i = csv::column_index(header, name);
    if (i < 0) throw ConfigError(fmt::format("roster: missing column: {}", name));
    return i;
  };
  const int team_col = require("team");
  const int member_col = require("member");
  const int crea_col = require("creativity");
  const int pres_col = require("presentation");
  const int cont_col = require("content");
  const int shared_col = csv::column_index(header, "shared");

  auto rating = [](const std::string& s, std::size_t line, std::string_view what) {
    double v = 0;
    std::string t = mime::trim(s);
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || p != t.data() + t.size()) {
      throw ConfigError(fmt::format("roster line {}: bad {} rating '{}'", line, what, s));
    }
    if (v < 1.0 || v > 5.0) {
      throw ConfigError(fmt::format("roster line {}: {} rating {} outside [1,5]", line, what, v));
    }
    return v;
  };

  std::vector<TeamRoster> rosters;
  std::map<TeamId, std::size_t> index;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() < header.size() - (shared_col >= 0 ? 1 : 0)) {
      throw ConfigError(fmt::format("roster line {}: too few fields", r + 1));
    }
    TeamId team = mime::trim(row[team_col]);
    ActorId member(row[member_col]);
    if (team.empty() || member.empty()) {
      throw ConfigError(fmt::format("roster line {}: empty team or member", r + 1));
    }
    Ratings ratings{rating(row[crea_col], r + 1, "creativity"),
                    rating(row[pres_col], r + 1, "presentation"),
                    rating(row[cont_col], r + 1, "content")};
    auto [it, fresh] = index.emplace(team, rosters.size());
    if (fresh) {
      rosters.push_back(TeamRoster{team, {}, {}, ratings});
    }
    TeamRoster& roster = rosters[it->second];
    if (roster.ratings.creativity != ratings.creativity ||
        roster.ratings.presentation != ratings.presentation ||
        roster.ratings.content != ratings.content) {
      throw ConfigError(fmt::format("roster line {}: ratings of team {} are inconsistent", r + 1,
                                    team));
    }
    roster.members.insert(member);
    if (shared_col >= 0 && shared_col < static_cast<int>(row.size())) {
      std::string flag = mime::to_lower(mime::trim(row[shared_col]));
      if (flag == "1" || flag == "true" || flag == "yes") roster.shared.insert(member);
    }
  }
  validate_rosters(rosters);
  return rosters;
}

std::vector<TeamRoster> load_rosters(const std::string& path) {
  return parse_rosters_csv(csv::read_file(path));
}

std::vector<TeamRoster> canonicalize_rosters(std::vector<TeamRoster> rosters,
                                             const AliasMap& aliases) {
  for (auto& r : rosters) {
    std::set<ActorId> members, shared;
    for (const auto& a : r.members) members.insert(aliases.resolve(a));
    for (const auto& a : r.shared) shared.insert(aliases.resolve(a));
    r.members = std::move(members);
    r.shared = std::move(shared);
  }
  validate_rosters(rosters);
  return rosters;
}

MessageSet canonicalize_actors(const MessageSet& ms, const AliasMap& aliases,
                               const CanonicalizeOptions& options) {
  aliases.validate();
  std::set<ActorId> dummies;
  for (const auto& d : options.dummy_addresses) dummies.insert(aliases.resolve(ActorId(d.str())));

  Diagnostics diag = ms.diagnostics();
  std::vector<Message> out;
  out.reserve(ms.size());
  for (const auto& original : ms.messages()) {
    Message m = original;
    m.sender = aliases.resolve(ActorId(m.sender.str()));
    std::vector<ActorId> recipients;
    bool addressed_to_self = false;
    for (const auto& r : original.recipients) {
      ActorId a = aliases.resolve(ActorId(r.str()));
      if (dummies.count(a)) continue;
      if (a == m.sender) {
        addressed_to_self = true;
        continue;
      }
      push_unique(recipients, std::move(a));
    }
    if (addressed_to_self && recipients.empty()) {
      diag.warn("self_loop", "message " + m.id + " addressed only to its sender removed");
      continue;
    }
    m.recipients = std::move(recipients);
    out.push_back(std::move(m));
  }
  return MessageSet(std::move(out), std::move(diag));
}

MessageSet assign_teams(const MessageSet& ms, std::span<const TeamRoster> rosters) {
  std::unordered_map<std::string, std::vector<std::size_t>> teams_of;
  for (std::size_t i = 0; i < rosters.size(); ++i) {
    for (const auto& a : rosters[i].members) teams_of[a.str()].push_back(i);
  }
  std::vector<Message> out(ms.messages().begin(), ms.messages().end());
  for (auto& m : out) {
    m.team.reset();
    auto sender_teams = teams_of.find(m.sender.str());
    if (sender_teams == teams_of.end()) continue;
    const TeamRoster* best = nullptr;
    std::size_t best_count = 0;
    for (std::size_t t : sender_teams->second) {
      const TeamRoster& roster = rosters[t];
      std::size_t in_team = 0;
      for (const auto& r : m.recipients) in_team += roster.contains(r) ? 1 : 0;
      if (in_team == 0) continue;
      std::size_t participants = in_team + 1;
      if (!best || participants > best_count ||
          (participants == best_count && roster.team < best->team)) {
        best = &roster;
        best_count = participants;
      }
    }
    if (best) m.team = best->team;
  }
  return MessageSet(std::move(out), ms.diagnostics());
}

}  // namespace vmirror
