#pragma once

// Shared helpers and independent reference implementations for the tests.
// The reference code deliberately avoids the library's algorithms.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <unistd.h>

#include <json.hpp>

namespace testing {

inline std::filesystem::path data_dir() { return VMIRROR_DATA_DIR; }

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline nlohmann::json load_json(const std::filesystem::path& p) {
  return nlohmann::json::parse(slurp(p));
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("vmirror-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Small labeled graph: nodes are 0..n-1, arcs (u,v) with weights.
struct SmallGraph {
  int n = 0;
  std::map<std::pair<int, int>, std::int64_t> arcs;
};

inline SmallGraph random_graph(std::mt19937_64& rng, int max_nodes, double p_edge) {
  SmallGraph g;
  g.n = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_nodes));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int a = 0; a < g.n; ++a) {
    for (int b = 0; b < g.n; ++b) {
      if (a != b && u(rng) < p_edge) g.arcs[{a, b}] = 1 + static_cast<std::int64_t>(rng() % 4);
    }
  }
  return g;
}

inline std::string node_name(int i) { return "n" + std::to_string(i) + "@x.org"; }

inline std::vector<std::set<int>> neighbours(const SmallGraph& g, bool directed) {
  std::vector<std::set<int>> adj(static_cast<std::size_t>(g.n));
  for (const auto& [e, w] : g.arcs) {
    adj[static_cast<std::size_t>(e.first)].insert(e.second);
    if (!directed) adj[static_cast<std::size_t>(e.second)].insert(e.first);
  }
  return adj;
}

// Every simple path from s to t, by depth-first search.
inline void all_paths(const std::vector<std::set<int>>& adj, int cur, int t, std::vector<int>& path,
                      std::vector<bool>& seen, std::vector<std::vector<int>>& out) {
  if (cur == t) {
    out.push_back(path);
    return;
  }
  for (int nxt : adj[static_cast<std::size_t>(cur)]) {
    if (seen[static_cast<std::size_t>(nxt)]) continue;
    seen[static_cast<std::size_t>(nxt)] = true;
    path.push_back(nxt);
    all_paths(adj, nxt, t, path, seen, out);
    path.pop_back();
    seen[static_cast<std::size_t>(nxt)] = false;
  }
}

// Betweenness by enumerating all simple paths and keeping the shortest
// ones for each pair. Unordered pairs when undirected.
inline std::vector<double> brute_betweenness(const SmallGraph& g, bool normalized, bool directed) {
  const auto adj = neighbours(g, directed);
  std::vector<double> bc(static_cast<std::size_t>(g.n), 0.0);
  for (int s = 0; s < g.n; ++s) {
    for (int t = 0; t < g.n; ++t) {
      if (s == t || (!directed && t < s)) continue;
      std::vector<std::vector<int>> paths;
      std::vector<int> path{s};
      std::vector<bool> seen(static_cast<std::size_t>(g.n), false);
      seen[static_cast<std::size_t>(s)] = true;
      all_paths(adj, s, t, path, seen, paths);
      if (paths.empty()) continue;
      std::size_t shortest = paths.front().size();
      for (const auto& p : paths) shortest = std::min(shortest, p.size());
      double count = 0;
      std::vector<double> through(static_cast<std::size_t>(g.n), 0.0);
      for (const auto& p : paths) {
        if (p.size() != shortest) continue;
        ++count;
        for (std::size_t i = 1; i + 1 < p.size(); ++i) through[static_cast<std::size_t>(p[i])] += 1;
      }
      for (int v = 0; v < g.n; ++v) bc[static_cast<std::size_t>(v)] += through[static_cast<std::size_t>(v)] / count;
    }
  }
  if (normalized) {
    const double n = g.n;
    const double scale = n < 3 ? 0.0 : (directed ? (n - 1) * (n - 2) : (n - 1) * (n - 2) / 2);
    for (double& b : bc) b = scale == 0.0 ? 0.0 : b / scale;
  }
  return bc;
}

inline double pearson_ref(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    syy += y[i] * y[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
}

}  // namespace testing
