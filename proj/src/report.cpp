#include "vmirror/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "vmirror/csv.hpp"
#include "vmirror/error.hpp"

namespace vmirror {
namespace {

std::string fixed6(double v) { return fmt::format("{:.6f}", v); }

std::string fixed6(const std::optional<double>& v) { return v ? fixed6(*v) : std::string{}; }

std::optional<double> parse_number(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (s.empty() || s == "NA" || s == "na" || s == "-") return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    throw InputError("not a number: '" + std::string(s) + "'");
  }
  return v;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

template <typename Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  writer(out);
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  write_file(path, [&](std::ostream& out) { out << content; });
}

void export_surface(const TemporalSurface& surface, std::ostream& out) {
  csv::Row header{"actor"};
  for (int d : surface.days) header.push_back(fmt::format("day_{}", d));
  csv::write_row(out, header);
  for (std::size_t a = 0; a < surface.actors.size(); ++a) {
    csv::Row row{surface.actors[a].str()};
    for (double v : surface.values[a]) row.push_back(fixed6(v));
    csv::write_row(out, row);
  }
}

void export_surface(const TemporalSurface& surface, const std::filesystem::path& path) {
  write_file(path, [&](std::ostream& out) { export_surface(surface, out); });
}

TemporalSurface read_surface(std::string_view csv_text) {
  auto rows = csv::parse(csv_text);
  if (rows.empty() || rows[0].empty() || rows[0][0] != "actor") {
    throw InputError("surface CSV: header must start with 'actor'");
  }
  TemporalSurface s;
  for (std::size_t c = 1; c < rows[0].size(); ++c) {
    const std::string& h = rows[0][c];
    if (!h.starts_with("day_")) throw InputError("surface CSV: bad column " + h);
    s.days.push_back(std::stoi(h.substr(4)));
  }
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != rows[0].size()) throw InputError("surface CSV: ragged row");
    s.actors.emplace_back(rows[r][0]);
    std::vector<double> values;
    for (std::size_t c = 1; c < rows[r].size(); ++c) values.push_back(parse_number(rows[r][c]).value_or(0.0));
    s.values.push_back(std::move(values));
  }
  return s;
}

std::vector<ContributionPoint> contribution_scatter(const MessageSet& ms,
                                                    std::span<const TeamRoster> rosters) {
  std::map<ActorId, TrafficCount> traffic;
  for (const auto& m : ms.messages()) {
    ++traffic[m.sender].sent;
    for (const auto& r : m.recipients) ++traffic[r].received;
  }
  std::vector<ContributionPoint> points;
  for (const auto& [actor, c] : traffic) {
    if (c.sent + c.received == 0) continue;
    std::string teams;
    for (const auto& roster : rosters) {
      if (!roster.contains(actor)) continue;
      if (!teams.empty()) teams += '|';
      teams += roster.team;
    }
    points.push_back({actor, teams, c.sent + c.received, contribution_index(c.sent, c.received)});
  }
  return points;
}

void export_contribution_scatter(const MessageSet& ms, std::span<const TeamRoster> rosters,
                                 std::ostream& out) {
  csv::write_row(out, {"actor", "team", "messages_total", "contribution_index"});
  for (const auto& p : contribution_scatter(ms, rosters)) {
    csv::write_row(out, {p.actor.str(), p.team, std::to_string(p.messages_total),
                         fixed6(p.contribution_index)});
  }
}

std::vector<TimeSeries> activity_series(const MessageSet& ms,
                                        std::span<const WindowedGraph> windows,
                                        const TeamRoster& roster, const WindowConfig& cfg,
                                        bool directed) {
  std::vector<TimeSeries> out = {{"group_betweenness", {}},
                                 {"group_degree", {}},
                                 {"density", {}},
                                 {"messages_sent", {}},
                                 {"messages_received", {}}};
  if (ms.empty()) return out;
  const std::int64_t origin = cfg.origin_day.value_or(day_number(ms.span().first));
  for (const auto& w : windows) {
    const auto& g = w.graph;
    out[0].points.emplace_back(w.day_index,
                               centralization(betweenness(g, true, directed), g.node_count()));
    out[1].points.emplace_back(w.day_index, centralization(degree(g), g.node_count()));
    out[2].points.emplace_back(w.day_index, density(g));

    const std::int64_t end_day = static_cast<std::int64_t>(w.day_index) * cfg.step_days;
    Timestamp start = w.day_index == 0 ? Timestamp::min()
                                       : day_start(origin + end_day - cfg.step_days + 1);
    std::int64_t sent = 0, received = 0;
    for (const auto& m : ms.between(start, day_start(origin + end_day + 1))) {
      if (m.team != roster.team) continue;
      ++sent;
      for (const auto& r : m.recipients) received += roster.contains(r) ? 1 : 0;
    }
    out[3].points.emplace_back(w.day_index, static_cast<double>(sent));
    out[4].points.emplace_back(w.day_index, static_cast<double>(received));
  }
  return out;
}

std::vector<TimeSeries> sentiment_series(const MessageSet& ms,
                                         std::span<const WindowedGraph> windows,
                                         const SentimentLexicon& lex,
                                         const std::optional<TeamId>& team) {
  std::vector<TimeSeries> out = {{"positive", {}}, {"negative", {}}, {"emotionality", {}}};
  for (const auto& w : windows) {
    double pos = 0.0, neg = 0.0;
    std::size_t n = 0;
    for (const auto& m : ms.between(w.graph.interval().start, w.graph.interval().end)) {
      if (team && m.team != *team) continue;
      auto s = sentiment_score(m.body, lex);
      pos += s.pos;
      neg += s.neg;
      ++n;
    }
    if (n == 0) continue;
    pos /= static_cast<double>(n);
    neg /= static_cast<double>(n);
    out[0].points.emplace_back(w.day_index, pos);
    out[1].points.emplace_back(w.day_index, neg);
    out[2].points.emplace_back(w.day_index, pos + neg);
  }
  return out;
}

void render_timeseries_svg(std::span<const TimeSeries> series, std::ostream& out,
                           const std::string& title) {
  if (series.empty()) throw std::invalid_argument("render_timeseries_svg: no series");
  for (const auto& s : series) {
    if (s.points.size() < 2) {
      throw std::invalid_argument("render_timeseries_svg: series '" + s.name +
                                  "' has fewer than 2 points");
    }
    for (std::size_t i = 1; i < s.points.size(); ++i) {
      if (s.points[i].first <= s.points[i - 1].first) {
        throw std::invalid_argument("render_timeseries_svg: days of '" + s.name +
                                    "' not strictly increasing");
      }
    }
  }
  static constexpr std::array<std::string_view, 8> kColors = {
      "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"};
  constexpr double kWidth = 800, kHeight = 400;
  constexpr double kLeft = 70, kRight = 170, kTop = 40, kBottom = 50;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  int x_min = series[0].points.front().first, x_max = x_min;
  double y_min = series[0].points.front().second, y_max = y_min;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
  }
  const double x_span = x_max > x_min ? x_max - x_min : 1.0;
  const double y_span = y_max > y_min ? y_max - y_min : 1.0;
  auto px = [&](double x) { return kLeft + (x - x_min) / x_span * plot_w; };
  auto py = [&](double y) { return kTop + plot_h - (y - y_min) / y_span * plot_h; };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
  out << fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{:.0f}\" "
      "height=\"{:.0f}\" viewBox=\"0 0 {:.0f} {:.0f}\">\n",
      kWidth, kHeight, kWidth, kHeight);
  out << "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty()) {
    out << fmt::format(
        "<text x=\"{:.2f}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" "
        "text-anchor=\"middle\">{}</text>\n",
        kLeft + plot_w / 2, xml_escape(title));
  }
  // Axes with min/max labels.
  out << fmt::format(
      "<g stroke=\"black\" stroke-width=\"1\"><line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" "
      "y2=\"{1:.2f}\"/><line x1=\"{0:.2f}\" y1=\"{3:.2f}\" x2=\"{0:.2f}\" y2=\"{1:.2f}\"/></g>\n",
      kLeft, kTop + plot_h, kLeft + plot_w, kTop);
  out << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  out << fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n", kLeft,
                     kTop + plot_h + 18, x_min);
  out << fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n",
                     kLeft + plot_w, kTop + plot_h + 18, x_max);
  out << fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">day</text>\n",
                     kLeft + plot_w / 2, kTop + plot_h + 36);
  out << fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{:.3g}</text>\n",
                     kLeft - 6, kTop + plot_h + 4, y_min);
  out << fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{:.3g}</text>\n",
                     kLeft - 6, kTop + 4, y_max);
  out << "</g>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto color = kColors[i % kColors.size()];
    std::string pts;
    for (const auto& [x, y] : series[i].points) {
      if (!pts.empty()) pts += ' ';
      pts += fmt::format("{:.2f},{:.2f}", px(x), py(y));
    }
    out << fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
                       color, pts);
  }
  out << "<g class=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double y = kTop + 10 + 18.0 * static_cast<double>(i);
    const double x = kLeft + plot_w + 15;
    out << fmt::format(
        "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"{}\" "
        "stroke-width=\"3\"/><text x=\"{:.2f}\" y=\"{:.2f}\">{}</text>\n",
        x, y, x + 20, y, kColors[i % kColors.size()], x + 26, y + 4,
        xml_escape(series[i].name));
  }
  out << "</g>\n</svg>\n";
}

void render_timeseries_svg(std::span<const TimeSeries> series, const std::filesystem::path& path,
                           const std::string& title) {
  std::ostringstream buffer;
  render_timeseries_svg(series, buffer, title);  // validate before touching the file
  write_text_file(path, buffer.str());
}

void write_team_metrics_csv(std::span<const TeamMetricsRow> rows, std::ostream& out) {
  csv::write_row(out, team_metrics_columns());
  for (const auto& r : rows) {
    csv::write_row(out, {r.team, fixed6(r.creativity), std::to_string(r.bc_oscillations),
                         fixed6(r.art_norm_min), fixed6(r.pos_sent), fixed6(r.awvci),
                         fixed6(r.gbc_strong_tie), fixed6(r.group_dc), std::to_string(r.msg_recvd),
                         std::to_string(r.num_actors)});
  }
}

MetricsTable read_team_metrics_csv(std::string_view csv_text) {
  auto rows = csv::parse(csv_text);
  if (rows.empty()) throw InputError("metrics CSV: empty file");
  MetricsTable table;
  std::vector<std::optional<std::string>> mapping;
  for (const auto& h : rows[0]) {
    auto canon = canonical_column(h);
    mapping.push_back(canon);
    if (canon) {
      if (std::find(table.columns.begin(), table.columns.end(), *canon) != table.columns.end()) {
        throw InputError("metrics CSV: duplicate column " + *canon);
      }
      table.columns.push_back(*canon);
    }
  }
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != mapping.size()) {
      throw InputError(fmt::format("metrics CSV line {}: {} fields, expected {}", r + 1,
                                   row.size(), mapping.size()));
    }
    TeamMetricsRow m;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (!mapping[c]) continue;
      const std::string& name = *mapping[c];
      if (name == "team") {
        m.team = row[c];
        continue;
      }
      std::optional<double> v;
      try {
        v = parse_number(row[c]);
      } catch (const InputError& e) {
        throw InputError(fmt::format("metrics CSV line {}, column {}: {}", r + 1, name, e.what()));
      }
      if (name == "creativity") m.creativity = v.value_or(0.0);
      else if (name == "bc_oscillations") m.bc_oscillations = static_cast<int>(std::lround(v.value_or(0)));
      else if (name == "art_norm_min") m.art_norm_min = v;
      else if (name == "pos_sent") m.pos_sent = v;
      else if (name == "awvci") m.awvci = v;
      else if (name == "gbc_strong_tie") m.gbc_strong_tie = v.value_or(0.0);
      else if (name == "group_dc") m.group_dc = v.value_or(0.0);
      else if (name == "msg_recvd") m.msg_recvd = std::llround(v.value_or(0));
      else if (name == "num_actors") m.num_actors = std::llround(v.value_or(0));
    }
    table.rows.push_back(std::move(m));
  }
  return table;
}

std::string format_coefficient(double v) {
  std::string s = fmt::format("{:.3f}", v);
  if (s == "-0.000") s = "0.000";
  if (s.starts_with("0.")) return s.substr(1);
  if (s.starts_with("-0.")) return "-" + s.substr(2);
  return s;
}

void write_correlations_csv(const CorrelationTable& table, std::ostream& out) {
  csv::write_row(out, {"column_a", "column_b", "r", "p", "n"});
  const std::size_t k = table.columns.size();
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const auto& c = table.cells[i][j];
      csv::write_row(out, {table.columns[i], table.columns[j], c ? fixed6(c->r) : "",
                           c ? fixed6(c->p) : "", c ? std::to_string(c->n) : "0"});
    }
  }
}

void write_correlations_text(const CorrelationTable& table, std::ostream& out) {
  const std::size_t k = table.columns.size();
  if (k < 2) return;
  std::size_t name_w = 0;
  for (const auto& c : table.columns) name_w = std::max(name_w, c.size());
  const std::string labels[3] = {"Pearson Correlation", "Sig. (2-tailed)", "N"};
  const std::size_t label_w = labels[0].size();
  std::vector<std::size_t> col_w(k, 8);
  for (std::size_t j = 1; j < k; ++j) col_w[j] = std::max<std::size_t>(9, table.columns[j].size());

  out << fmt::format("{:<{}}  {:<{}}", "", name_w, "", label_w);
  for (std::size_t j = 1; j < k; ++j) out << fmt::format("  {:>{}}", table.columns[j], col_w[j]);
  out << '\n';
  for (std::size_t i = 0; i + 1 < k; ++i) {
    for (int line = 0; line < 3; ++line) {
      out << fmt::format("{:<{}}  {:<{}}", line == 0 ? table.columns[i] : "", name_w,
                         labels[line], label_w);
      for (std::size_t j = 1; j < k; ++j) {
        std::string text;
        if (j > i) {
          const auto& c = table.cells[i][j];
          if (!c) {
            text = line == 2 ? "0" : "";
          } else if (line == 0) {
            text = format_coefficient(c->r) + significance_stars(*c->p);
          } else if (line == 1) {
            text = format_coefficient(*c->p);
          } else {
            text = std::to_string(c->n);
          }
        }
        out << fmt::format("  {:>{}}", text, col_w[j]);
      }
      out << '\n';
    }
  }
  out << "**. Correlation is significant at the 0.01 level (2-tailed).\n";
  out << "*. Correlation is significant at the 0.05 level (2-tailed).\n";
}

std::vector<std::filesystem::path> emit_run_report(std::span<const TeamMetricsRow> rows,
                                                   const CorrelationTable& corr,
                                                   const std::filesystem::path& outdir,
                                                   const nlohmann::json& manifest) {
  std::error_code ec;
  std::filesystem::create_directories(outdir, ec);
  if (ec) throw Error("cannot create output directory " + outdir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written = {
      outdir / "team_metrics.csv", outdir / "correlations.csv", outdir / "correlations.txt",
      outdir / "manifest.json"};
  write_file(written[0], [&](std::ostream& out) { write_team_metrics_csv(rows, out); });
  write_file(written[1], [&](std::ostream& out) { write_correlations_csv(corr, out); });
  write_file(written[2], [&](std::ostream& out) { write_correlations_text(corr, out); });
  write_file(written[3], [&](std::ostream& out) { out << manifest.dump(2) << '\n'; });
  return written;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 failed");
  }
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string sha256_file(const std::filesystem::path& path) {
  return sha256_hex(csv::read_file(path.string()));
}

}  // namespace vmirror
