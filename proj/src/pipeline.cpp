#include "vmirror/pipeline.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "vmirror/csv.hpp"
#include "vmirror/report.hpp"

namespace vmirror {
namespace {

template <typename F>
auto stage(const std::string& name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const ConfigError& e) {
    throw ConfigError(name + ": " + e.what());
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError(name, e.what());
  }
}

SentimentLexicon load_lexicon(const RunConfig& cfg) {
  if (cfg.lexicon_positive && cfg.lexicon_negative) {
    return SentimentLexicon::from_files(cfg.lexicon_positive->string(),
                                        cfg.lexicon_negative->string());
  }
  return SentimentLexicon::builtin();
}

std::string safe_name(const std::string& s) {
  std::string out;
  for (char c : s) out += std::isalnum(static_cast<unsigned char>(c)) || c == '-' ? c : '_';
  return out;
}

nlohmann::json diagnostics_json(const Diagnostics& d) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, c] : d.counts) j[k] = c;
  return j;
}

}  // namespace

Corpus load_corpus(const RunConfig& cfg) {
  return stage("ingest", [&] {
    std::vector<Message> all;
    Diagnostics diag;
    for (const auto& path : cfg.inputs) {
      MessageSet part = path.extension() == ".csv" ? parse_message_csv(path.string())
                                                   : parse_mbox(path.string());
      diag.merge(part.diagnostics());
      all.insert(all.end(), part.messages().begin(), part.messages().end());
    }
    MessageSet merged(std::move(all), std::move(diag));

    AliasMap aliases = cfg.aliases ? load_aliases(cfg.aliases->string()) : AliasMap{};
    CanonicalizeOptions opts;
    for (const auto& d : cfg.dummy_addresses) opts.dummy_addresses.insert(ActorId(d));
    auto rosters = canonicalize_rosters(load_rosters(cfg.rosters.string()), aliases);
    MessageSet canonical = canonicalize_actors(merged, aliases, opts);
    return Corpus{assign_teams(canonical, rosters), std::move(rosters)};
  });
}

AnalysisResult run_analysis(const RunConfig& cfg) {
  AnalysisResult result;
  Corpus corpus = load_corpus(cfg);
  const MessageSet& ms = corpus.messages;
  result.diagnostics = ms.diagnostics();
  if (ms.empty()) throw PipelineError("ingest", "no usable messages in the input");

  const SentimentLexicon lexicon = stage("metrics", [&] { return load_lexicon(cfg); });
  MetricsConfig mcfg = cfg.metrics;
  if (!mcfg.window.origin_day) mcfg.window.origin_day = day_number(ms.span().first);

  nlohmann::json teams = nlohmann::json::array();
  for (const auto& roster : corpus.rosters) {
    TeamMetricsRow row = stage("metrics", [&] { return team_metrics(ms, roster, mcfg, lexicon); });
    nlohmann::json missing = nlohmann::json::array();
    if (!row.art_norm_min) missing.push_back("art_norm_min");
    if (!row.pos_sent) missing.push_back("pos_sent");
    if (!row.awvci) missing.push_back("awvci");
    teams.push_back({{"team", row.team}, {"members", roster.members.size()}, {"missing", missing}});
    result.rows.push_back(std::move(row));
  }

  result.correlations = stage("stats", [&] {
    if (result.rows.size() < 3) {
      throw std::invalid_argument(
          fmt::format("need >= 3 teams to correlate, have {}", result.rows.size()));
    }
    return correlation_matrix(std::span<const TeamMetricsRow>(result.rows), cfg.columns);
  });

  std::size_t tagged = 0;
  for (const auto& m : ms.messages()) tagged += m.team ? 1 : 0;

  nlohmann::json inputs = nlohmann::json::array();
  auto add_input = [&](const std::string& key, const std::filesystem::path& path) {
    inputs.push_back({{"key", key}, {"file", path.filename().string()},
                      {"sha256", sha256_file(path)}});
  };
  stage("report", [&] {
    for (const auto& p : cfg.inputs) add_input("input", p);
    add_input("rosters", cfg.rosters);
    if (cfg.aliases) add_input("aliases", *cfg.aliases);
    if (cfg.lexicon_positive) add_input("lexicon.positive", *cfg.lexicon_positive);
    if (cfg.lexicon_negative) add_input("lexicon.negative", *cfg.lexicon_negative);
  });

  const auto& w = mcfg.window;
  result.manifest = {
      {"tool", "vmirror"},
      {"version", VMIRROR_VERSION},
      {"config", cfg.echo},
      {"window",
       {{"step_days", w.step_days},
        {"lookback_days", w.lookback_days},
        {"mode", w.mode == WindowMode::sliding ? "sliding" : "cumulative"},
        {"origin", format_iso8601(day_start(*w.origin_day)).substr(0, 10)}}},
      {"strong_tie", cfg.metrics.strong_tie.mode == StrongTieThreshold::Mode::mean
                         ? nlohmann::json("mean")
                         : nlohmann::json(cfg.metrics.strong_tie.value)},
      {"art_cutoff_minutes", cfg.metrics.art_cutoff_minutes},
      {"directed", cfg.metrics.directed},
      {"inputs", inputs},
      {"messages",
       {{"total", ms.size()}, {"team_tagged", tagged}, {"actors", ms.actors().size()}}},
      {"warnings", diagnostics_json(ms.diagnostics())},
      {"warnings_total", ms.diagnostics().total()},
      {"teams", teams},
      {"columns", cfg.columns},
  };

  stage("report", [&] {
    result.files = emit_run_report(result.rows, result.correlations, cfg.output_dir, result.manifest);
    if (!cfg.figures) return;
    std::ostringstream scatter;
    export_contribution_scatter(ms, corpus.rosters, scatter);
    write_text_file(cfg.output_dir / "contribution_scatter.csv", scatter.str());
    result.files.push_back(cfg.output_dir / "contribution_scatter.csv");

    const auto fig_dir = cfg.output_dir / "figures";
    std::filesystem::create_directories(fig_dir);
    for (const auto& roster : corpus.rosters) {
      const std::string base = "team_" + safe_name(roster.team);
      const auto windows = window_series(ms, w, roster);
      auto surface_path = fig_dir / (base + "_surface.csv");
      export_surface(temporal_surface(windows, roster, mcfg.directed), surface_path);
      result.files.push_back(surface_path);

      auto activity = activity_series(ms, windows, roster, w, mcfg.directed);
      auto sentiment = sentiment_series(ms, windows, lexicon, roster.team);
      if (windows.size() >= 2) {
        std::vector<TimeSeries> structure(activity.begin(), activity.begin() + 3);
        std::vector<TimeSeries> volume(activity.begin() + 3, activity.end());
        render_timeseries_svg(structure, fig_dir / (base + "_structure.svg"),
                              "Team " + roster.team + ": centralization and density");
        render_timeseries_svg(volume, fig_dir / (base + "_volume.svg"),
                              "Team " + roster.team + ": messages sent and received");
        result.files.push_back(fig_dir / (base + "_structure.svg"));
        result.files.push_back(fig_dir / (base + "_volume.svg"));
      }
      if (sentiment[0].points.size() >= 2) {
        render_timeseries_svg(sentiment, fig_dir / (base + "_sentiment.svg"),
                              "Team " + roster.team + ": sentiment");
        result.files.push_back(fig_dir / (base + "_sentiment.svg"));
      }
    }
  });
  return result;
}

CorrelationTable run_correlate(const std::filesystem::path& metrics_csv,
                               const std::vector<std::string>& columns,
                               const std::filesystem::path& outdir) {
  if (columns.size() < 2) throw ConfigError("need >= 2 columns");
  MetricsTable table = stage("ingest", [&] {
    return read_team_metrics_csv(csv::read_file(metrics_csv.string()));
  });
  for (const auto& c : columns) {
    auto canon = canonical_column(c);
    if (!canon || *canon == "team" ||
        std::find(table.columns.begin(), table.columns.end(), *canon) == table.columns.end()) {
      throw ConfigError("unknown column: " + c);
    }
  }
  CorrelationTable corr = stage("stats", [&] {
    return correlation_matrix(std::span<const TeamMetricsRow>(table.rows), columns);
  });
  stage("report", [&] {
    std::filesystem::create_directories(outdir);
    std::ostringstream csv_out, text_out;
    write_correlations_csv(corr, csv_out);
    write_correlations_text(corr, text_out);
    write_text_file(outdir / "correlations.csv", csv_out.str());
    write_text_file(outdir / "correlations.txt", text_out.str());
  });
  return corr;
}

std::vector<std::filesystem::path> export_graphs(const RunConfig& cfg,
                                                 const std::filesystem::path& outdir,
                                                 int snapshots) {
  Corpus corpus = load_corpus(cfg);
  const MessageSet& ms = corpus.messages;
  if (ms.empty()) throw PipelineError("ingest", "no usable messages in the input");
  std::vector<std::filesystem::path> files;
  stage("report", [&] {
    std::filesystem::create_directories(outdir);
    auto write_graph = [&](const CommGraph& g, const std::string& base) {
      std::ostringstream edges, dot;
      write_edge_list_csv(g, edges);
      write_dot(g, dot, base);
      write_text_file(outdir / (base + ".csv"), edges.str());
      write_text_file(outdir / (base + ".dot"), dot.str());
      files.push_back(outdir / (base + ".csv"));
      files.push_back(outdir / (base + ".dot"));
    };
    const Interval all = full_span(ms);
    write_graph(build_graph(ms, all), "course");
    for (const auto& roster : corpus.rosters) {
      write_graph(build_graph(ms, all, roster), "team_" + safe_name(roster.team));
    }
    if (snapshots > 0) {
      const auto windows = window_series(ms, cfg.metrics.window);
      const std::size_t n = windows.size();
      std::set<std::size_t> picks;
      for (int s = 0; s < snapshots; ++s) {
        picks.insert(snapshots == 1 ? n - 1
                                    : static_cast<std::size_t>(s) * (n - 1) /
                                          static_cast<std::size_t>(snapshots - 1));
      }
      for (std::size_t i : picks) {
        write_graph(windows[i].graph, fmt::format("snapshot_day_{:03d}", windows[i].day_index));
      }
    }
  });
  return files;
}

std::vector<std::filesystem::path> export_surfaces(const RunConfig& cfg,
                                                   const std::filesystem::path& outdir,
                                                   const std::optional<TeamId>& team) {
  Corpus corpus = load_corpus(cfg);
  const MessageSet& ms = corpus.messages;
  if (ms.empty()) throw PipelineError("ingest", "no usable messages in the input");
  if (team && std::none_of(corpus.rosters.begin(), corpus.rosters.end(),
                           [&](const TeamRoster& r) { return r.team == *team; })) {
    throw ConfigError("unknown team: " + *team);
  }
  std::vector<std::filesystem::path> files;
  stage("report", [&] {
    std::filesystem::create_directories(outdir);
    for (const auto& roster : corpus.rosters) {
      if (team && roster.team != *team) continue;
      const auto windows = window_series(ms, cfg.metrics.window, roster);
      const std::string base = "team_" + safe_name(roster.team);
      export_surface(temporal_surface(windows, roster, cfg.metrics.directed),
                     outdir / (base + "_surface.csv"));
      const auto leaders = leadership_series(windows, roster, cfg.metrics.directed);
      std::ostringstream out;
      csv::write_row(out, {"day", "leader"});
      for (std::size_t i = 0; i < leaders.days.size(); ++i) {
        csv::write_row(out, {std::to_string(leaders.days[i]),
                             leaders.leaders[i] ? leaders.leaders[i]->str() : ""});
      }
      write_text_file(outdir / (base + "_leaders.csv"), out.str());
      files.push_back(outdir / (base + "_surface.csv"));
      files.push_back(outdir / (base + "_leaders.csv"));
    }
  });
  return files;
}

}  // namespace vmirror
