#include "vmirror/graph.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

#include "vmirror/csv.hpp"
#include "vmirror/error.hpp"

namespace vmirror {
namespace {

using std::chrono::days;

std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

template <typename Filter>
void add_messages(CommGraph& g, std::span<const Message> messages, Filter&& keep_recipient) {
  for (const auto& m : messages) {
    for (const auto& r : m.recipients) {
      if (r == m.sender || !keep_recipient(m, r)) continue;
      g.add_edge(m.sender, r);
    }
  }
}

std::vector<WindowedGraph> windows_impl(const MessageSet& ms, const WindowConfig& cfg,
                                        const TeamRoster* roster) {
  cfg.validate();
  if (ms.empty()) throw std::invalid_argument("window_series: empty message set");
  const std::int64_t origin = cfg.origin_day.value_or(day_number(ms.span().first));
  const std::int64_t last_day = std::max<std::int64_t>(0, day_number(ms.span().last) - origin);
  const std::int64_t count = (last_day + cfg.step_days - 1) / cfg.step_days + 1;

  std::vector<WindowedGraph> out;
  out.reserve(static_cast<std::size_t>(count));
  for (std::int64_t k = 0; k < count; ++k) {
    const std::int64_t end_day = k * cfg.step_days;
    std::int64_t first_day = cfg.mode == WindowMode::cumulative
                                 ? 0
                                 : std::max<std::int64_t>(0, end_day - cfg.lookback_days + 1);
    Interval iv{day_start(origin + first_day), day_start(origin + end_day + 1)};
    WindowedGraph w;
    w.day_index = static_cast<int>(k);
    w.graph = roster ? build_graph(ms, iv, *roster) : build_graph(ms, iv);

    Timestamp new_start =
        k == 0 ? Timestamp::min() : day_start(origin + end_day - cfg.step_days + 1);
    for (const auto& m : ms.between(new_start, iv.end)) {
      if (!roster || m.team == roster->team) ++w.new_messages;
    }
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace

void CommGraph::add_edge(const ActorId& src, const ActorId& dst, std::int64_t weight) {
  if (src == dst) throw std::invalid_argument("CommGraph: self-loop on " + src.str());
  if (weight < 1) throw std::invalid_argument("CommGraph: edge weight must be >= 1");
  nodes_.insert(src);
  nodes_.insert(dst);
  edges_[{src, dst}] += weight;
}

std::int64_t CommGraph::weight(const ActorId& src, const ActorId& dst) const {
  auto it = edges_.find({src, dst});
  return it == edges_.end() ? 0 : it->second;
}

std::int64_t CommGraph::total_weight() const {
  std::int64_t total = 0;
  for (const auto& [_, w] : edges_) total += w;
  return total;
}

Adjacency symmetrized_adjacency(const CommGraph& g) {
  auto nodes = g.node_list();
  auto index = [&](const ActorId& a) {
    return static_cast<std::size_t>(std::lower_bound(nodes.begin(), nodes.end(), a) -
                                    nodes.begin());
  };
  Adjacency adj(nodes.size());
  for (const auto& [e, _] : g.edges()) {
    std::size_t u = index(e.first), v = index(e.second);
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (auto& list : adj) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return adj;
}

Adjacency directed_adjacency(const CommGraph& g) {
  auto nodes = g.node_list();
  Adjacency adj(nodes.size());
  for (const auto& [e, _] : g.edges()) {
    auto u = std::lower_bound(nodes.begin(), nodes.end(), e.first) - nodes.begin();
    auto v = std::lower_bound(nodes.begin(), nodes.end(), e.second) - nodes.begin();
    adj[u].push_back(static_cast<std::size_t>(v));
  }
  return adj;  // edges() is sorted, so each list is already sorted and unique
}

void WindowConfig::validate() const {
  if (step_days < 1) throw ConfigError("window: step must be >= 1 day");
  if (lookback_days < step_days) throw ConfigError("window: lookback must be >= step");
}

Interval full_span(const MessageSet& ms) {
  if (ms.empty()) return {};
  return {ms.span().first, ms.span().last + std::chrono::seconds{1}};
}

CommGraph build_graph(const MessageSet& ms, Interval interval) {
  CommGraph g(interval);
  add_messages(g, ms.between(interval.start, interval.end),
               [](const Message&, const ActorId&) { return true; });
  return g;
}

CommGraph build_graph(const MessageSet& ms, Interval interval, const TeamRoster& roster) {
  CommGraph g(interval);
  for (const auto& a : roster.members) g.add_node(a);
  add_messages(g, ms.between(interval.start, interval.end),
               [&](const Message& m, const ActorId& r) {
                 return m.team == roster.team && roster.contains(m.sender) && roster.contains(r);
               });
  return g;
}

std::vector<WindowedGraph> window_series(const MessageSet& ms, const WindowConfig& cfg) {
  return windows_impl(ms, cfg, nullptr);
}

std::vector<WindowedGraph> window_series(const MessageSet& ms, const WindowConfig& cfg,
                                         const TeamRoster& roster) {
  return windows_impl(ms, cfg, &roster);
}

double density(const CommGraph& g) {
  const double n = static_cast<double>(g.node_count());
  if (n < 2) return 0.0;
  return static_cast<double>(g.edge_count()) / (n * (n - 1));
}

CommGraph strong_tie_filter(const CommGraph& g, double threshold) {
  CommGraph out(g.interval());
  for (const auto& a : g.nodes()) out.add_node(a);
  for (const auto& [e, w] : g.edges()) {
    if (static_cast<double>(w + g.weight(e.second, e.first)) >= threshold) {
      out.add_edge(e.first, e.second, w);
    }
  }
  return out;
}

double mean_symmetrized_weight(const CommGraph& g) {
  std::int64_t total = 0;
  std::size_t pairs = 0;
  for (const auto& [e, w] : g.edges()) {
    const std::int64_t back = g.weight(e.second, e.first);
    if (back > 0 && e.second < e.first) continue;  // pair already counted
    total += w + back;
    ++pairs;
  }
  return pairs == 0 ? 0.0 : static_cast<double>(total) / static_cast<double>(pairs);
}

void write_edge_list_csv(const CommGraph& g, std::ostream& out) {
  csv::write_row(out, {"src", "dst", "weight"});
  for (const auto& [e, w] : g.edges()) {
    csv::write_row(out, {e.first.str(), e.second.str(), std::to_string(w)});
  }
}

void write_dot(const CommGraph& g, std::ostream& out, const std::string& name) {
  out << "digraph " << dot_quote(name) << " {\n";
  for (const auto& a : g.nodes()) out << "  " << dot_quote(a.str()) << ";\n";
  for (const auto& [e, w] : g.edges()) {
    out << "  " << dot_quote(e.first.str()) << " -> " << dot_quote(e.second.str())
        << " [weight=" << w << "];\n";
  }
  out << "}\n";
}

}  // namespace vmirror
