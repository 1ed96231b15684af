#include "vmirror/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <unordered_map>

#include "vmirror/error.hpp"

namespace vmirror {
namespace {

constexpr double kTieTolerance = 1e-9;

bool has_reply_prefix(std::string_view subject, std::string_view* rest) {
  std::size_t i = 0;
  while (i < subject.size() && std::isspace(static_cast<unsigned char>(subject[i]))) ++i;
  for (std::string_view prefix : {"re:", "fwd:", "fw:"}) {
    if (subject.size() - i < prefix.size()) continue;
    bool match = true;
    for (std::size_t k = 0; k < prefix.size(); ++k) {
      if (std::tolower(static_cast<unsigned char>(subject[i + k])) != prefix[k]) match = false;
    }
    if (match) {
      *rest = subject.substr(i + prefix.size());
      return true;
    }
  }
  return false;
}

}  // namespace

double contribution_index(std::int64_t sent, std::int64_t received) {
  if (sent < 0 || received < 0) throw std::invalid_argument("contribution_index: negative count");
  if (sent + received == 0) {
    throw std::invalid_argument("contribution_index: undefined without traffic");
  }
  return static_cast<double>(sent - received) / static_cast<double>(sent + received);
}

std::map<ActorId, TrafficCount> member_traffic(const MessageSet& ms, const TeamRoster& roster) {
  std::map<ActorId, TrafficCount> counts;
  for (const auto& a : roster.members) counts[a];
  for (const auto& m : ms.messages()) {
    if (m.team != roster.team) continue;
    if (roster.contains(m.sender)) ++counts[m.sender].sent;
    for (const auto& r : m.recipients) {
      if (roster.contains(r)) ++counts[r].received;
    }
  }
  return counts;
}

double awvci(const MessageSet& ms, const TeamRoster& roster) {
  double total = 0.0;
  const auto traffic = member_traffic(ms, roster);
  for (const auto& [_, c] : traffic) total += static_cast<double>(c.sent + c.received);
  if (total == 0.0) throw MetricError("no team traffic for team " + roster.team);

  std::vector<std::pair<double, double>> weighted;  // (weight, CI)
  double mean = 0.0;
  for (const auto& [_, c] : traffic) {
    if (c.sent + c.received == 0) continue;
    const double w = static_cast<double>(c.sent + c.received) / total;
    const double ci = contribution_index(c.sent, c.received);
    weighted.emplace_back(w, ci);
    mean += w * ci;
  }
  double var = 0.0;
  for (const auto& [w, ci] : weighted) var += w * (ci - mean) * (ci - mean);
  return var;
}

LeaderSeries leadership_series(std::span<const WindowedGraph> windows, const TeamRoster& roster,
                               bool directed) {
  LeaderSeries series;
  std::optional<ActorId> incumbent;
  for (const auto& w : windows) {
    series.days.push_back(w.day_index);
    std::optional<ActorId> leader;
    if (w.graph.edge_count() > 0) {
      const ActorScores bc = betweenness(w.graph, false, directed);
      double best = 0.0;
      for (const auto& a : roster.members) best = std::max(best, bc.at(a));
      if (best > 0.0) {
        const double floor = best * (1.0 - kTieTolerance);
        if (incumbent && bc.at(*incumbent) >= floor && roster.contains(*incumbent)) {
          leader = incumbent;
        } else {
          for (const auto& a : roster.members) {  // sorted, so the first hit is the smallest
            if (bc.at(a) >= floor) {
              leader = a;
              break;
            }
          }
        }
      }
    }
    if (leader) incumbent = leader;
    series.leaders.push_back(std::move(leader));
  }
  return series;
}

int count_handovers(const LeaderSeries& series) {
  int count = 0;
  for (std::size_t i = 1; i < series.leaders.size(); ++i) {
    const auto& prev = series.leaders[i - 1];
    const auto& cur = series.leaders[i];
    if (prev && cur && *prev != *cur) ++count;
  }
  return count;
}

std::string normalize_subject(std::string_view subject) {
  std::string_view rest = subject;
  std::string_view next;
  while (has_reply_prefix(rest, &next)) rest = next;
  std::size_t b = 0, e = rest.size();
  while (b < e && std::isspace(static_cast<unsigned char>(rest[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(rest[e - 1]))) --e;
  std::string out(rest.substr(b, e - b));
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

ResponseTimes response_times(const MessageSet& ms, const TeamId& team, double cutoff_minutes) {
  if (!(cutoff_minutes > 0)) throw std::invalid_argument("response_times: cutoff must be > 0");
  std::vector<const Message*> msgs;
  std::unordered_map<std::string_view, std::size_t> by_id;
  std::unordered_map<std::string, std::vector<std::size_t>> by_subject;
  for (const auto& m : ms.messages()) {
    if (m.team != team) continue;
    by_id.emplace(m.id, msgs.size());
    by_subject[normalize_subject(m.subject)].push_back(msgs.size());
    msgs.push_back(&m);
  }

  std::vector<std::optional<Timestamp>> earliest(msgs.size());
  auto offer = [&](std::size_t parent, const Message& reply) {
    const Message& m = *msgs[parent];
    if (reply.sender == m.sender || reply.timestamp < m.timestamp || &reply == &m) return;
    if (!earliest[parent] || reply.timestamp < *earliest[parent]) {
      earliest[parent] = reply.timestamp;
    }
  };

  for (const Message* r : msgs) {
    if (!r->reply_parents.empty()) {
      for (const auto& pid : r->reply_parents) {
        if (auto it = by_id.find(pid); it != by_id.end()) offer(it->second, *r);
      }
      continue;
    }
    std::string_view unused;
    if (!has_reply_prefix(r->subject, &unused)) continue;
    for (std::size_t parent : by_subject[normalize_subject(r->subject)]) {
      const Message& m = *msgs[parent];
      if (std::find(m.recipients.begin(), m.recipients.end(), r->sender) != m.recipients.end()) {
        offer(parent, *r);
      }
    }
  }

  ResponseTimes out;
  double sum = 0.0;
  for (std::size_t i = 0; i < msgs.size(); ++i) {
    if (!earliest[i]) continue;
    const double minutes =
        std::chrono::duration<double>(*earliest[i] - msgs[i]->timestamp).count() / 60.0;
    if (minutes > cutoff_minutes) continue;
    sum += minutes;
    ++out.pairs;
  }
  if (out.pairs == 0) throw MetricError("no replies detected for team " + team);
  out.mean_minutes = sum / static_cast<double>(out.pairs);
  return out;
}

TemporalSurface temporal_surface(std::span<const WindowedGraph> windows,
                                 const TeamRoster& roster, bool directed) {
  TemporalSurface s;
  s.actors.assign(roster.members.begin(), roster.members.end());
  s.values.assign(s.actors.size(), std::vector<double>(windows.size(), 0.0));
  for (std::size_t d = 0; d < windows.size(); ++d) {
    s.days.push_back(windows[d].day_index);
    const ActorScores bc = betweenness(windows[d].graph, true, directed);
    for (std::size_t a = 0; a < s.actors.size(); ++a) s.values[a][d] = bc.at(s.actors[a]);
  }
  return s;
}

const std::vector<std::string>& team_metrics_columns() {
  static const std::vector<std::string> columns = {
      "team",   "creativity",     "bc_oscillations", "art_norm_min", "pos_sent",
      "awvci",  "gbc_strong_tie", "group_dc",        "msg_recvd",    "num_actors"};
  return columns;
}

std::optional<std::string> canonical_column(std::string_view name) {
  std::string key;
  for (char c : name) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (!key.empty() && key.back() != '_') {
      key += '_';
    }
  }
  while (!key.empty() && key.back() == '_') key.pop_back();

  static const std::map<std::string, std::string, std::less<>> aliases = {
      {"team", "team"},
      {"team_num", "team"},
      {"creativity", "creativity"},
      {"creativity_low_is_better", "creativity"},
      {"bc_oscillations", "bc_oscillations"},
      {"num_bc_oscillations", "bc_oscillations"},
      {"num_of_bc_oscillations", "bc_oscillations"},
      {"bc_coscillations", "bc_oscillations"},
      {"oscillations", "bc_oscillations"},
      {"art_norm_min", "art_norm_min"},
      {"art_norm", "art_norm_min"},
      {"art", "art_norm_min"},
      {"pos_sent", "pos_sent"},
      {"possent", "pos_sent"},
      {"awvci", "awvci"},
      {"awv_ci", "awvci"},
      {"gbc_strong_tie", "gbc_strong_tie"},
      {"gbc_str_ong_tie", "gbc_strong_tie"},
      {"gbc_stro_ng_tie", "gbc_strong_tie"},
      {"bc_strong_tie", "gbc_strong_tie"},
      {"bc_stro_ng_tie", "gbc_strong_tie"},
      {"group_dc", "group_dc"},
      {"msg_recvd", "msg_recvd"},
      {"num_actors", "num_actors"},
  };
  auto it = aliases.find(key);
  if (it == aliases.end()) return std::nullopt;
  return it->second;
}

std::optional<double> column_value(const TeamMetricsRow& row, std::string_view column) {
  auto name = canonical_column(column);
  if (!name) throw std::out_of_range("unknown column: " + std::string(column));
  if (*name == "creativity") return row.creativity;
  if (*name == "bc_oscillations") return row.bc_oscillations;
  if (*name == "art_norm_min") return row.art_norm_min;
  if (*name == "pos_sent") return row.pos_sent;
  if (*name == "awvci") return row.awvci;
  if (*name == "gbc_strong_tie") return row.gbc_strong_tie;
  if (*name == "group_dc") return row.group_dc;
  if (*name == "msg_recvd") return static_cast<double>(row.msg_recvd);
  if (*name == "num_actors") return static_cast<double>(row.num_actors);
  throw std::out_of_range("column is not numeric: " + std::string(column));
}

TeamMetricsRow team_metrics(const MessageSet& ms, const TeamRoster& roster,
                            const MetricsConfig& cfg, const SentimentLexicon& lex) {
  if (roster.members.empty()) throw std::invalid_argument("team_metrics: empty roster");
  TeamMetricsRow row;
  row.team = roster.team;
  row.creativity = roster.ratings.creativity;

  if (!ms.empty()) {
    const auto windows = window_series(ms, cfg.window, roster);
    row.bc_oscillations = count_handovers(leadership_series(windows, roster, cfg.directed));
  }

  const CommGraph g = build_graph(ms, full_span(ms), roster);
  double threshold = cfg.strong_tie.value;
  if (cfg.strong_tie.mode == StrongTieThreshold::Mode::mean) {
    threshold = std::max(1.0, mean_symmetrized_weight(g));
  }
  const CommGraph strong = strong_tie_filter(g, threshold);
  row.gbc_strong_tie = centralization(betweenness(strong, true, cfg.directed), strong.node_count());
  row.group_dc = centralization(degree(g), g.node_count());

  std::set<ActorId> actors;
  for (const auto& m : ms.messages()) {
    if (m.team != roster.team) continue;
    actors.insert(m.sender);
    for (const auto& r : m.recipients) {
      actors.insert(r);
      if (roster.contains(r)) ++row.msg_recvd;
    }
  }
  row.num_actors = static_cast<std::int64_t>(actors.size());

  try {
    row.art_norm_min = response_times(ms, roster.team, cfg.art_cutoff_minutes).mean_minutes;
  } catch (const MetricError&) {
  }
  try {
    row.pos_sent = team_sentiment(ms, roster.team, lex).pos;
  } catch (const MetricError&) {
  }
  try {
    row.awvci = awvci(ms, roster);
  } catch (const MetricError&) {
  }
  return row;
}

}  // namespace vmirror
