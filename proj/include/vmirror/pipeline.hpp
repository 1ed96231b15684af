#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "vmirror/config.hpp"
#include "vmirror/error.hpp"
#include "vmirror/ingest.hpp"
#include "vmirror/stats.hpp"

namespace vmirror {

/// Runtime failure inside one pipeline stage (exit code 1 in the CLI).
class PipelineError : public Error {
 public:
  PipelineError(std::string stage, const std::string& what)
      : Error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

/// Canonicalized, team-tagged messages with their rosters.
struct Corpus {
  MessageSet messages;
  std::vector<TeamRoster> rosters;
};

Corpus load_corpus(const RunConfig& cfg);

struct AnalysisResult {
  std::vector<TeamMetricsRow> rows;
  CorrelationTable correlations;
  nlohmann::json manifest;
  std::vector<std::filesystem::path> files;
  Diagnostics diagnostics;
};

/// ingest -> graph -> metrics -> stats -> report. Metric failures for one
/// team become missing cells; stage failures throw PipelineError (or
/// ConfigError for invalid aliases/rosters).
AnalysisResult run_analysis(const RunConfig& cfg);

/// Correlates columns of a team metrics CSV and writes correlations.csv
/// and correlations.txt into outdir. Throws ConfigError for unknown
/// columns or fewer than two.
CorrelationTable run_correlate(const std::filesystem::path& metrics_csv,
                               const std::vector<std::string>& columns,
                               const std::filesystem::path& outdir);

/// Edge lists and DOT files for the whole course and each team, plus
/// `snapshots` evenly spaced whole-course window graphs.
std::vector<std::filesystem::path> export_graphs(const RunConfig& cfg,
                                                 const std::filesystem::path& outdir,
                                                 int snapshots = 6);

/// Temporal surface CSV and leader series per team (or only `team`).
std::vector<std::filesystem::path> export_surfaces(const RunConfig& cfg,
                                                   const std::filesystem::path& outdir,
                                                   const std::optional<TeamId>& team = {});

}  // namespace vmirror
