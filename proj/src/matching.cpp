#include "leafspine/matching.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>

namespace leafspine {

bool MatchingSet::is_valid() const {
  if (static_cast<int>(matchings.size()) != k) return false;
  std::vector<char> hit(n);
  for (const auto& m : matchings) {
    if (static_cast<int>(m.size()) != n) return false;
    std::fill(hit.begin(), hit.end(), 0);
    for (int v : m) {
      if (v < 0 || v >= n || hit[v]) return false;
      hit[v] = 1;
    }
  }
  return true;
}

namespace {

// Hopcroft-Karp on the residual bipartite graph. Left side = out-ports,
// right side = in-ports; adjacency carries parallel-edge multiplicity.
struct HopcroftKarp {
  const std::vector<std::vector<int>>& adj;
  int n;
  std::vector<int> match_l, match_r, level;

  explicit HopcroftKarp(const std::vector<std::vector<int>>& a)
      : adj(a),
        n(static_cast<int>(a.size())),
        match_l(n, -1),
        match_r(n, -1),
        level(n) {}

  bool bfs() {
    std::queue<int> q;
    bool reachable_free = false;
    for (int u = 0; u < n; ++u) {
      if (match_l[u] == -1) {
        level[u] = 0;
        q.push(u);
      } else {
        level[u] = -1;
      }
    }
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int v : adj[u]) {
        int w = match_r[v];
        if (w == -1) {
          reachable_free = true;
        } else if (level[w] == -1) {
          level[w] = level[u] + 1;
          q.push(w);
        }
      }
    }
    return reachable_free;
  }

  bool dfs(int u) {
    for (int v : adj[u]) {
      int w = match_r[v];
      if (w == -1 || (level[w] == level[u] + 1 && dfs(w))) {
        match_l[u] = v;
        match_r[v] = u;
        return true;
      }
    }
    level[u] = -1;
    return false;
  }

  int solve() {
    int matched = 0;
    while (bfs()) {
      for (int u = 0; u < n; ++u) {
        if (match_l[u] == -1 && dfs(u)) ++matched;
      }
    }
    return matched;
  }
};

}  // namespace

MatchingSet decompose_to_matchings(const Network& g) {
  if (!g.is_regular()) {
    throw std::invalid_argument(
        "decompose_to_matchings requires a k-regular network");
  }
  const int n = g.n();
  const int k = g.k();
  std::vector<std::vector<int>> residual(n);
  for (int u = 0; u < n; ++u) residual[u] = g.out_neighbors(u);

  MatchingSet result{n, k, {}};
  result.matchings.reserve(k);
  for (int round = 0; round < k; ++round) {
    HopcroftKarp hk(residual);
    if (hk.solve() != n) {
      throw std::logic_error(
          "perfect matching extraction failed on a regular graph");
    }
    result.matchings.push_back(hk.match_l);
    for (int u = 0; u < n; ++u) {
      auto& adj = residual[u];
      adj.erase(std::find(adj.begin(), adj.end(), hk.match_l[u]));
    }
  }
  return result;
}

Network union_of_matchings(const MatchingSet& m) {
  if (!m.is_valid()) {
    throw std::invalid_argument("matching set is not a list of k bijections");
  }
  Network g(m.n, m.k);
  for (const auto& matching : m.matchings) {
    for (int v = 0; v < m.n; ++v) {
      if (matching[v] != v) g.add_edge(v, matching[v]);  // v -> v is parked
    }
  }
  return g;
}

nlohmann::json matching_set_to_json(const MatchingSet& m) {
  return nlohmann::json{{"n", m.n}, {"k", m.k}, {"matchings", m.matchings}};
}

MatchingSet matching_set_from_json(const nlohmann::json& j) {
  MatchingSet m;
  m.n = j.at("n").get<int>();
  m.k = j.at("k").get<int>();
  m.matchings = j.at("matchings").get<std::vector<std::vector<int>>>();
  if (!m.is_valid()) {
    throw std::invalid_argument("matching set JSON fails validation");
  }
  return m;
}

}  // namespace leafspine
