#include "vmirror/centrality.hpp"

#include <algorithm>
#include <queue>

namespace vmirror {
namespace {

// Brandes (2001): one BFS per source, dependencies accumulated in reverse
// BFS order. Returns ordered-pair sums.
std::vector<double> brandes(const Adjacency& adj) {
  const std::size_t n = adj.size();
  std::vector<double> bc(n, 0.0);
  std::vector<double> sigma(n), delta(n);
  std::vector<long> dist(n);
  std::vector<std::vector<std::size_t>> preds(n);
  std::vector<std::size_t> order;
  order.reserve(n);

  for (std::size_t s = 0; s < n; ++s) {
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    std::fill(dist.begin(), dist.end(), -1);
    for (auto& p : preds) p.clear();
    order.clear();

    sigma[s] = 1.0;
    dist[s] = 0;
    std::queue<std::size_t> queue;
    queue.push(s);
    while (!queue.empty()) {
      std::size_t v = queue.front();
      queue.pop();
      order.push_back(v);
      for (std::size_t w : adj[v]) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          queue.push(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          preds[w].push_back(v);
        }
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      std::size_t w = *it;
      for (std::size_t v : preds[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != s) bc[w] += delta[w];
    }
  }
  return bc;
}

}  // namespace

double ActorScores::at(const ActorId& a) const {
  auto it = values.find(a);
  return it == values.end() ? 0.0 : it->second;
}

double ActorScores::max() const {
  double m = 0.0;
  for (const auto& [_, v] : values) m = std::max(m, v);
  return m;
}

ActorScores betweenness(const CommGraph& g, bool normalized, bool directed) {
  ActorScores scores{ScoreKind::betweenness, normalized, directed, {}};
  const auto nodes = g.node_list();
  const std::size_t n = nodes.size();
  for (const auto& a : nodes) scores.values[a] = 0.0;
  if (n < 3) return scores;

  std::vector<double> bc = brandes(directed ? directed_adjacency(g) : symmetrized_adjacency(g));
  const double pairs = static_cast<double>((n - 1) * (n - 2));
  for (std::size_t i = 0; i < n; ++i) {
    double v = directed ? bc[i] : bc[i] / 2.0;
    if (normalized) v /= directed ? pairs : pairs / 2.0;
    scores.values[nodes[i]] = v;
  }
  return scores;
}

ActorScores degree(const CommGraph& g) {
  ActorScores scores{ScoreKind::degree, false, false, {}};
  const auto nodes = g.node_list();
  const auto adj = symmetrized_adjacency(g);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    scores.values[nodes[i]] = static_cast<double>(adj[i].size());
  }
  return scores;
}

double centralization(const ActorScores& scores, std::size_t n) {
  if (n < 3) return 0.0;
  const double nn = static_cast<double>(n);
  double scale = 1.0;
  double denom = 0.0;
  if (scores.kind == ScoreKind::betweenness) {
    if (!scores.normalized) {
      scale = scores.directed ? (nn - 1) * (nn - 2) : (nn - 1) * (nn - 2) / 2.0;
    }
    denom = nn - 1;
  } else {
    denom = (nn - 1) * (nn - 2);
  }
  const double top = scores.max() / scale;
  double sum = 0.0;
  for (const auto& [_, v] : scores.values) sum += top - v / scale;
  if (scores.values.size() < n) sum += top * static_cast<double>(n - scores.values.size());
  return std::clamp(sum / denom, 0.0, 1.0);
}

}  // namespace vmirror
