#pragma once

#include <map>

#include "vmirror/graph.hpp"

namespace vmirror {

enum class ScoreKind { betweenness, degree };

/// Per-actor centrality scores over the nodes of one graph.
struct ActorScores {
  ScoreKind kind = ScoreKind::betweenness;
  bool normalized = false;
  bool directed = false;
  std::map<ActorId, double> values;

  double at(const ActorId& a) const;
  double max() const;
};

/// Brandes betweenness on the unweighted simple graph: symmetrized by
/// default, directed when `directed` is set. Undirected scores count each
/// unordered pair once. Normalization divides by (n-1)(n-2)/2, or by
/// (n-1)(n-2) for directed graphs; graphs with n < 3 score 0 everywhere.
ActorScores betweenness(const CommGraph& g, bool normalized, bool directed = false);

/// Number of distinct neighbours in the symmetrized graph.
ActorScores degree(const CommGraph& g);

/// Freeman group centralization in [0,1]: sum over actors of (max - score)
/// divided by the value of the same sum on a star of n nodes. Betweenness
/// uses normalized scores with denominator n-1; degree uses raw degrees
/// with denominator (n-1)(n-2). Returns 0 for n < 3. Actors missing from
/// `scores` count as 0.
double centralization(const ActorScores& scores, std::size_t n);

}  // namespace vmirror
