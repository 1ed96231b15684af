#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vmirror/centrality.hpp"
#include "vmirror/graph.hpp"
#include "vmirror/ingest.hpp"
#include "vmirror/sentiment.hpp"

namespace vmirror {

/// (sent - received) / (sent + received): +1 pure sender, -1 pure receiver.
/// Throws std::invalid_argument when both counts are zero.
double contribution_index(std::int64_t sent, std::int64_t received);

struct TrafficCount {
  std::int64_t sent = 0;
  std::int64_t received = 0;
};

/// Per-member send/receive counts over the team's tagged messages; a
/// message with k member recipients counts as k receptions.
std::map<ActorId, TrafficCount> member_traffic(const MessageSet& ms, const TeamRoster& roster);

/// Traffic-weighted variance of member contribution indices. Members
/// without traffic are excluded. Throws MetricError("no team traffic").
double awvci(const MessageSet& ms, const TeamRoster& roster);

struct LeaderSeries {
  std::vector<int> days;
  std::vector<std::optional<ActorId>> leaders;  // parallel to days
};

/// Per window, the roster member with the highest betweenness. Exact ties
/// keep the previous leader, otherwise the smallest ActorId wins. Windows
/// where no member has positive betweenness have no leader.
LeaderSeries leadership_series(std::span<const WindowedGraph> windows, const TeamRoster& roster,
                               bool directed = false);

/// Leader changes between adjacent windows that both have a leader.
int count_handovers(const LeaderSeries& series);

/// Case-folded subject with leading Re:/Fw:/Fwd: prefixes removed.
std::string normalize_subject(std::string_view subject);

struct ResponseTimes {
  double mean_minutes = 0.0;
  std::size_t pairs = 0;
};

/// Mean latency from a team message to its earliest reply by another
/// actor. Replies are found through In-Reply-To/References, or for replies
/// without those headers by normalized subject with the replier among the
/// original recipients. Latencies above the cutoff count as no response.
/// Throws MetricError("no replies detected").
ResponseTimes response_times(const MessageSet& ms, const TeamId& team,
                             double cutoff_minutes = 20160.0);

/// Actors x windows matrix of normalized betweenness.
struct TemporalSurface {
  std::vector<ActorId> actors;
  std::vector<int> days;
  std::vector<std::vector<double>> values;  // values[actor][day]
};

TemporalSurface temporal_surface(std::span<const WindowedGraph> windows,
                                 const TeamRoster& roster, bool directed = false);

struct StrongTieThreshold {
  enum class Mode { mean, fixed };
  Mode mode = Mode::mean;
  double value = 1.0;  // used when mode == fixed
};

struct MetricsConfig {
  WindowConfig window;
  StrongTieThreshold strong_tie;
  double art_cutoff_minutes = 20160.0;
  bool directed = false;
};

/// One row of the team metrics table. Optional fields are missing when the
/// underlying metric is undefined for the team's data.
struct TeamMetricsRow {
  TeamId team;
  double creativity = 0.0;
  int bc_oscillations = 0;
  std::optional<double> art_norm_min;
  std::optional<double> pos_sent;
  std::optional<double> awvci;
  double gbc_strong_tie = 0.0;
  double group_dc = 0.0;
  std::int64_t msg_recvd = 0;
  std::int64_t num_actors = 0;

  friend bool operator==(const TeamMetricsRow&, const TeamMetricsRow&) = default;
};

/// Column names of TeamMetricsRow in table order.
const std::vector<std::string>& team_metrics_columns();

/// Numeric value of a named column; nullopt for a missing cell. Names are
/// matched case-insensitively with spaces treated as underscores, and the
/// Table-style headers ("ART Norm (min)", "Msg Recvd", ...) are accepted.
/// Throws std::out_of_range for an unknown column.
std::optional<double> column_value(const TeamMetricsRow& row, std::string_view column);

/// Canonical column name for a user-supplied spelling, or nullopt.
std::optional<std::string> canonical_column(std::string_view name);

TeamMetricsRow team_metrics(const MessageSet& ms, const TeamRoster& roster,
                            const MetricsConfig& cfg, const SentimentLexicon& lex);

}  // namespace vmirror
