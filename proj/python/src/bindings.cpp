#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "vmirror/centrality.hpp"
#include "vmirror/config.hpp"
#include "vmirror/ingest.hpp"
#include "vmirror/metrics.hpp"
#include "vmirror/pipeline.hpp"
#include "vmirror/sentiment.hpp"
#include "vmirror/stats.hpp"
#include "vmirror/synth.hpp"

namespace py = pybind11;
using namespace vmirror;

namespace {

CommGraph graph_from_edges(const std::vector<std::tuple<std::string, std::string, std::int64_t>>& edges) {
  CommGraph g;
  for (const auto& [a, b, w] : edges) g.add_edge(ActorId(a), ActorId(b), w);
  return g;
}

py::dict scores_dict(const ActorScores& s) {
  py::dict out;
  for (const auto& [a, v] : s.values) out[py::str(a.str())] = v;
  return out;
}

py::dict message_dict(const Message& m) {
  py::list recipients;
  for (const auto& r : m.recipients) recipients.append(r.str());
  py::dict d;
  d["id"] = m.id;
  d["sender"] = m.sender.str();
  d["recipients"] = recipients;
  d["timestamp"] = format_iso8601(m.timestamp);
  d["subject"] = m.subject;
  d["body"] = m.body;
  d["reply_parents"] = m.reply_parents;
  d["team"] = m.team ? py::object(py::str(*m.team)) : py::object(py::none());
  return d;
}

py::tuple messages_tuple(const MessageSet& ms) {
  py::list msgs;
  for (const auto& m : ms.messages()) msgs.append(message_dict(m));
  return py::make_tuple(msgs, ms.diagnostics().counts);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "vmirror core: e-mail network metrics for distributed project teams";
  m.attr("__version__") = VMIRROR_VERSION;

  static py::exception<Error> base(m, "VmirrorError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<InputError>(m, "InputError", base.ptr());
  py::register_exception<MetricError>(m, "MetricError", base.ptr());
  py::register_exception<PipelineError>(m, "PipelineError", base.ptr());

  m.def("pearson", [](const std::vector<double>& x, const std::vector<double>& y) {
    return pearson(x, y);
  }, py::arg("x"), py::arg("y"));
  m.def("two_tailed_p", &two_tailed_p, py::arg("r"), py::arg("n"));
  m.def("significance_stars", &significance_stars, py::arg("p"));

  m.def("correlate",
        [](const std::vector<std::string>& columns,
           const std::vector<std::vector<std::optional<double>>>& data) {
          const auto table = correlation_matrix(columns, data);
          py::list out;
          for (std::size_t i = 0; i < columns.size(); ++i) {
            for (std::size_t j = i + 1; j < columns.size(); ++j) {
              const auto& cell = table.cells[i][j];
              py::dict d;
              d["a"] = columns[i];
              d["b"] = columns[j];
              d["r"] = cell ? py::object(py::float_(cell->r)) : py::object(py::none());
              d["p"] = cell && cell->p ? py::object(py::float_(*cell->p)) : py::object(py::none());
              d["n"] = cell ? cell->n : 0;
              out.append(d);
            }
          }
          return out;
        },
        py::arg("columns"), py::arg("rows"),
        "Pairwise-complete correlations; rows[i][j] is column j of observation i (None = missing).");

  m.def("parse_mbox_text", [](std::string_view text) { return messages_tuple(parse_mbox_text(text)); },
        py::arg("text"), "Returns (messages, warning counts).");
  m.def("parse_message_csv_text",
        [](std::string_view text) { return messages_tuple(parse_message_csv_text(text)); },
        py::arg("text"));
  m.def("normalize_address", &normalize_address, py::arg("address"));

  m.def("betweenness",
        [](const std::vector<std::tuple<std::string, std::string, std::int64_t>>& edges,
           bool normalized, bool directed) {
          return scores_dict(betweenness(graph_from_edges(edges), normalized, directed));
        },
        py::arg("edges"), py::arg("normalized") = true, py::arg("directed") = false,
        "Brandes betweenness over (src, dst, weight) edges; weights are ignored.");
  m.def("betweenness_centralization",
        [](const std::vector<std::tuple<std::string, std::string, std::int64_t>>& edges) {
          const CommGraph g = graph_from_edges(edges);
          return centralization(betweenness(g, true), g.node_count());
        },
        py::arg("edges"));
  m.def("degree_centralization",
        [](const std::vector<std::tuple<std::string, std::string, std::int64_t>>& edges) {
          const CommGraph g = graph_from_edges(edges);
          return centralization(degree(g), g.node_count());
        },
        py::arg("edges"));

  m.def("contribution_index", &contribution_index, py::arg("sent"), py::arg("received"));
  m.def("sentiment_score",
        [](std::string_view body) {
          const auto s = sentiment_score(body, SentimentLexicon::builtin());
          return py::make_tuple(s.pos, s.neg);
        },
        py::arg("body"), "(positive %, negative %) with the built-in lexicon.");
  m.def("count_handovers",
        [](const std::vector<std::optional<std::string>>& leaders) {
          LeaderSeries s;
          for (std::size_t i = 0; i < leaders.size(); ++i) {
            s.days.push_back(static_cast<std::int64_t>(i));
            s.leaders.push_back(leaders[i] ? std::optional<ActorId>(ActorId(*leaders[i])) : std::nullopt);
          }
          return count_handovers(s);
        },
        py::arg("leaders"));

  m.def("analyze",
        [](const std::filesystem::path& config, const std::vector<std::string>& overrides) {
          AnalysisResult result;
          {
            py::gil_scoped_release release;
            result = run_analysis(load_config(config, overrides));
          }
          py::list rows;
          for (const auto& row : result.rows) {
            py::dict d;
            d["team"] = row.team;
            for (const auto& c : default_correlation_columns()) {
              auto v = column_value(row, c);
              d[py::str(c)] = v ? py::object(py::float_(*v)) : py::object(py::none());
            }
            rows.append(d);
          }
          py::dict out;
          out["rows"] = rows;
          out["manifest_json"] = result.manifest.dump();
          out["files"] = result.files;
          return out;
        },
        py::arg("config"), py::arg("overrides") = std::vector<std::string>{});

  m.def("generate_course",
        [](const std::filesystem::path& out_dir, int days, std::uint64_t seed, int chatter, bool noise) {
          auto params = default_course_params(days, seed);
          params.chatter_per_day = chatter;
          params.noise = noise;
          return write_course(generate_course(params), out_dir);
        },
        py::arg("out_dir"), py::arg("days") = 150, py::arg("seed") = 42, py::arg("chatter") = 0,
        py::arg("noise") = true);
}
