#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "vmirror/metrics.hpp"
#include "vmirror/stats.hpp"

namespace vmirror {

struct TimeSeries {
  std::string name;
  std::vector<std::pair<int, double>> points;  // (day_index, value), day strictly increasing
};

/// `actor,day_0,day_1,...`, one row per actor, 6 decimals.
void export_surface(const TemporalSurface& surface, std::ostream& out);
void export_surface(const TemporalSurface& surface, const std::filesystem::path& path);
TemporalSurface read_surface(std::string_view csv_text);

struct ContributionPoint {
  ActorId actor;
  std::string team;  // roster teams joined by '|', empty for non-members
  std::int64_t messages_total = 0;
  double contribution_index = 0.0;
};

/// Per actor over all messages: sent + received and the contribution
/// index. Actors without traffic are omitted.
std::vector<ContributionPoint> contribution_scatter(const MessageSet& ms,
                                                    std::span<const TeamRoster> rosters);
/// CSV `actor,team,messages_total,contribution_index`.
void export_contribution_scatter(const MessageSet& ms, std::span<const TeamRoster> rosters,
                                 std::ostream& out);

/// Per-window series for one team: group betweenness centralization,
/// degree centralization, density, and messages sent/received in the
/// window's step (day-disjoint counts).
std::vector<TimeSeries> activity_series(const MessageSet& ms,
                                        std::span<const WindowedGraph> windows,
                                        const TeamRoster& roster, const WindowConfig& cfg,
                                        bool directed = false);

/// Mean positive/negative/emotionality of the messages inside each window
/// (team-tagged only when a team is given). Windows without messages are
/// skipped.
std::vector<TimeSeries> sentiment_series(const MessageSet& ms,
                                         std::span<const WindowedGraph> windows,
                                         const SentimentLexicon& lex,
                                         const std::optional<TeamId>& team = std::nullopt);

/// Standalone SVG 1.1 line chart, one polyline per series plus a legend and
/// min/max axis labels. Throws std::invalid_argument for no series or a
/// series with fewer than two points.
void render_timeseries_svg(std::span<const TimeSeries> series, std::ostream& out,
                           const std::string& title = "");
void render_timeseries_svg(std::span<const TimeSeries> series,
                           const std::filesystem::path& path, const std::string& title = "");

void write_team_metrics_csv(std::span<const TeamMetricsRow> rows, std::ostream& out);

struct MetricsTable {
  std::vector<std::string> columns;  // canonical names present in the file
  std::vector<TeamMetricsRow> rows;
};

/// Reads a team metrics CSV; headers are matched through canonical_column
/// and unknown headers are ignored. Empty or "NA" cells are missing.
MetricsTable read_team_metrics_csv(std::string_view csv_text);

/// `column_a,column_b,r,p,n` for each unordered pair.
void write_correlations_csv(const CorrelationTable& table, std::ostream& out);

/// Aligned text table: per row column, "Pearson Correlation", "Sig.
/// (2-tailed)" and "N" lines over the upper triangle, 3 decimals, stars.
void write_correlations_text(const CorrelationTable& table, std::ostream& out);

/// SPSS-style number: 3 decimals without the leading zero ("-.830").
std::string format_coefficient(double v);

/// Writes team_metrics.csv, correlations.csv, correlations.txt and
/// manifest.json into outdir (created if needed). Returns the written paths.
std::vector<std::filesystem::path> emit_run_report(std::span<const TeamMetricsRow> rows,
                                                   const CorrelationTable& corr,
                                                   const std::filesystem::path& outdir,
                                                   const nlohmann::json& manifest);

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(std::string_view data);

/// Opens a file for writing or throws Error naming it.
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace vmirror
