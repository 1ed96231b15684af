#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "vmirror/ingest.hpp"

namespace vmirror {

/// Half-open time interval [start, end).
struct Interval {
  Timestamp start{};
  Timestamp end{};

  bool contains(Timestamp t) const { return start <= t && t < end; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Directed, weighted communication graph. Edge weight is the number of
/// messages sent from src to dst; self-loops are rejected.
class CommGraph {
 public:
  using Edge = std::pair<ActorId, ActorId>;

  CommGraph() = default;
  explicit CommGraph(Interval interval) : interval_(interval) {}

  void add_node(const ActorId& a) { nodes_.insert(a); }

  /// Adds both endpoints as nodes. Throws std::invalid_argument for a
  /// self-loop or a non-positive weight.
  void add_edge(const ActorId& src, const ActorId& dst, std::int64_t weight = 1);

  const std::set<ActorId>& nodes() const { return nodes_; }
  const std::map<Edge, std::int64_t>& edges() const { return edges_; }
  const Interval& interval() const { return interval_; }

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::int64_t weight(const ActorId& src, const ActorId& dst) const;
  std::int64_t total_weight() const;

  /// Node order used by the index-based algorithms (the sorted node set).
  std::vector<ActorId> node_list() const { return {nodes_.begin(), nodes_.end()}; }

  friend bool operator==(const CommGraph&, const CommGraph&) = default;

 private:
  std::set<ActorId> nodes_;
  std::map<Edge, std::int64_t> edges_;
  Interval interval_{};
};

/// Adjacency lists over node_list() indices.
using Adjacency = std::vector<std::vector<std::size_t>>;

/// Undirected simple graph: u~v when either direction carries mail.
Adjacency symmetrized_adjacency(const CommGraph& g);
/// Directed simple graph (out-neighbours).
Adjacency directed_adjacency(const CommGraph& g);

enum class WindowMode { sliding, cumulative };

struct WindowConfig {
  int step_days = 1;
  int lookback_days = 7;
  WindowMode mode = WindowMode::sliding;
  /// First day of the course; defaults to the UTC day of the first message.
  std::optional<std::int64_t> origin_day;

  /// Throws ConfigError unless step >= 1 and lookback >= step.
  void validate() const;
};

struct WindowedGraph {
  int day_index = 0;
  CommGraph graph;
  /// Messages first attributed to this window: day in ((k-1)*step, k*step].
  std::size_t new_messages = 0;
};

/// Whole-course graph over all messages in the interval.
CommGraph build_graph(const MessageSet& ms, Interval interval);

/// Team graph: only messages tagged with the roster's team, only roster
/// members as nodes (isolated members included). Deliveries to
/// non-members are not edges of the team graph.
CommGraph build_graph(const MessageSet& ms, Interval interval, const TeamRoster& roster);

/// Interval covering every message of the set (empty interval if none).
Interval full_span(const MessageSet& ms);

/// One graph per window k = 0..floor(last_day/step). Window k ends at day
/// k*step and covers whole days (k*step - lookback, k*step], clipped at the
/// origin; in cumulative mode it starts at the origin.
std::vector<WindowedGraph> window_series(const MessageSet& ms, const WindowConfig& cfg);
std::vector<WindowedGraph> window_series(const MessageSet& ms, const WindowConfig& cfg,
                                         const TeamRoster& roster);

/// Distinct directed edges / n(n-1); 0 when n < 2.
double density(const CommGraph& g);

/// Keeps edges whose symmetrized weight w(u,v)+w(v,u) reaches the threshold.
CommGraph strong_tie_filter(const CommGraph& g, double threshold);

/// Mean symmetrized weight over connected unordered pairs; 0 without edges.
double mean_symmetrized_weight(const CommGraph& g);

void write_edge_list_csv(const CommGraph& g, std::ostream& out);
void write_dot(const CommGraph& g, std::ostream& out, const std::string& name = "comm");

}  // namespace vmirror
