#include "leafspine/network.hpp"

#include <algorithm>

#include "leafspine/rng.hpp"
#include <queue>

namespace leafspine {

Network::Network(int n, int k) : n_(n), k_(k) {
  if (n < 2) throw std::invalid_argument("node count must be at least 2");
  if (k < 1) throw std::invalid_argument("degree bound must be at least 1");
  if (n < k + 1) {
    throw std::invalid_argument(
        "a simple k-regular digraph without self-loops needs n >= k+1 (got "
        "n=" +
        std::to_string(n) + ", k=" + std::to_string(k) + ")");
  }
  out_.resize(n);
  in_.resize(n);
}

void Network::check_node(int v) const {
  if (v < 0 || v >= n_) {
    throw std::out_of_range("node id " + std::to_string(v) +
                            " outside [0," + std::to_string(n_) + ")");
  }
}

void Network::add_edge(int u, int v) {
  check_node(u);
  check_node(v);
  if (u == v) throw SelfLoopError(u);
  if (out_degree(u) >= k_) throw DegreeFullError(u, "out");
  if (in_degree(v) >= k_) throw DegreeFullError(v, "in");
  out_[u].push_back(v);
  in_[v].push_back(u);
  ++edges_;
}

void Network::remove_edge(int u, int v) {
  check_node(u);
  check_node(v);
  auto ito = std::find(out_[u].begin(), out_[u].end(), v);
  if (ito == out_[u].end()) {
    throw std::invalid_argument("edge (" + std::to_string(u) + "," +
                                std::to_string(v) + ") not present");
  }
  out_[u].erase(ito);
  auto iti = std::find(in_[v].begin(), in_[v].end(), u);
  in_[v].erase(iti);
  --edges_;
}

bool Network::has_edge(int u, int v) const {
  return std::find(out_[u].begin(), out_[u].end(), v) != out_[u].end();
}

bool Network::is_regular() const {
  for (int v = 0; v < n_; ++v) {
    if (out_degree(v) != k_ || in_degree(v) != k_) return false;
  }
  return true;
}

bool Network::is_complete() const {
  return is_regular() && strongly_connected_components(*this).count() == 1;
}

std::vector<std::pair<int, int>> Network::edge_multiset() const {
  std::vector<std::pair<int, int>> edges;
  edges.reserve(edges_);
  for (int u = 0; u < n_; ++u) {
    for (int v : out_[u]) edges.emplace_back(u, v);
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

std::vector<int> Network::distances_from(int s) const {
  check_node(s);
  std::vector<int> dist(n_, kUnreachable);
  dist[s] = 0;
  std::vector<int> frontier{s};
  std::vector<int> next;
  int level = 0;
  while (!frontier.empty()) {
    ++level;
    next.clear();
    for (int u : frontier) {
      for (int v : out_[u]) {
        if (dist[v] == kUnreachable) {
          dist[v] = level;
          next.push_back(v);
        }
      }
    }
    frontier.swap(next);
  }
  return dist;
}

int Network::dist(int s, int d) const {
  check_node(s);
  check_node(d);
  if (s == d) return 0;
  std::vector<int> dist(n_, kUnreachable);
  dist[s] = 0;
  std::queue<int> q;
  q.push(s);
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : out_[u]) {
      if (dist[v] != kUnreachable) continue;
      dist[v] = dist[u] + 1;
      if (v == d) return dist[v];
      q.push(v);
    }
  }
  return kUnreachable;
}

std::optional<NearestHit> nearest_available(const Network& g, int start,
                                            Direction dir,
                                            std::mt19937_64& tie_rng) {
  const int k = g.k();
  auto available = [&](int v) {
    return dir == Direction::Forward ? g.out_degree(v) < k
                                     : g.in_degree(v) < k;
  };
  std::vector<char> seen(g.n(), 0);
  seen[start] = 1;
  std::vector<int> frontier{start};
  std::vector<int> next;
  std::vector<int> hits;
  int level = 0;
  while (!frontier.empty()) {
    hits.clear();
    for (int v : frontier) {
      if (available(v)) hits.push_back(v);
    }
    if (!hits.empty()) {
      int pick = hits[rand_index(tie_rng, hits.size())];
      return NearestHit{pick, level};
    }
    next.clear();
    for (int u : frontier) {
      const auto& adj = dir == Direction::Forward ? g.out_neighbors(u)
                                                  : g.in_neighbors(u);
      for (int v : adj) {
        if (!seen[v]) {
          seen[v] = 1;
          next.push_back(v);
        }
      }
    }
    frontier.swap(next);
    ++level;
  }
  return std::nullopt;
}

namespace {

struct TarjanState {
  const Network& g;
  SccPartition out;
  std::vector<int> index, low;
  std::vector<char> on_stack;
  std::vector<int> stack;
  int counter = 0;

  explicit TarjanState(const Network& net)
      : g(net),
        index(net.n(), -1),
        low(net.n(), 0),
        on_stack(net.n(), 0) {
    out.component.assign(net.n(), -1);
  }

  // Iterative DFS: frame = (node, next out-edge position).
  void run(int root) {
    std::vector<std::pair<int, std::size_t>> frames;
    frames.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!frames.empty()) {
      auto& [v, pos] = frames.back();
      const auto& adj = g.out_neighbors(v);
      if (pos < adj.size()) {
        int w = adj[pos++];
        if (index[w] == -1) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
      } else {
        if (low[v] == index[v]) {
          std::vector<int> comp;
          int id = static_cast<int>(out.members.size());
          for (;;) {
            int w = stack.back();
            stack.pop_back();
            on_stack[w] = 0;
            out.component[w] = id;
            comp.push_back(w);
            if (w == v) break;
          }
          out.members.push_back(std::move(comp));
        }
        int done = v;
        frames.pop_back();
        if (!frames.empty()) {
          int parent = frames.back().first;
          low[parent] = std::min(low[parent], low[done]);
        }
      }
    }
  }
};

}  // namespace

SccPartition strongly_connected_components(const Network& g) {
  TarjanState st(g);
  for (int v = 0; v < g.n(); ++v) {
    if (st.index[v] == -1) st.run(v);
  }
  return std::move(st.out);
}

void DistanceCache::reset(const Network& g) {
  g_ = &g;
  rows_.assign(g.n(), {});
}

int DistanceCache::dist(int s, int d) {
  auto& row = rows_[s];
  if (row.empty()) row = g_->distances_from(s);
  return row[d];
}

}  // namespace leafspine
