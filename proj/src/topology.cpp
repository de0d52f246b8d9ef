#include "leafspine/topology.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <unordered_set>

#include "leafspine/rng.hpp"

namespace leafspine {

nlohmann::json repair_log_to_json(const std::vector<RepairAction>& log) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& a : log) {
    nlohmann::json item{{"kind", a.kind},
                        {"removed", nlohmann::json::array()},
                        {"added", nlohmann::json::array()}};
    for (auto [u, v] : a.removed) item["removed"].push_back({u, v});
    for (auto [u, v] : a.added) item["added"].push_back({u, v});
    arr.push_back(std::move(item));
  }
  return arr;
}

namespace {

std::vector<int> deficient_out(const Network& g) {
  std::vector<int> v;
  for (int u = 0; u < g.n(); ++u) {
    if (g.out_degree(u) < g.k()) v.push_back(u);
  }
  return v;
}

std::vector<int> deficient_in(const Network& g) {
  std::vector<int> v;
  for (int u = 0; u < g.n(); ++u) {
    if (g.in_degree(u) < g.k()) v.push_back(u);
  }
  return v;
}

// Random existing edge, roughly uniform: random node with out-edges, then a
// random out-slot.
std::optional<std::pair<int, int>> random_edge(const Network& g,
                                               std::mt19937_64& rng) {
  for (int att = 0; att < 8 * g.n(); ++att) {
    int a = static_cast<int>(rand_index(rng, g.n()));
    if (g.out_degree(a) == 0) continue;
    int b = g.out_neighbors(a)[rand_index(rng, g.out_neighbors(a).size())];
    return std::make_pair(a, b);
  }
  return std::nullopt;
}

}  // namespace

RepairResult repair(Network g, const DemandMatrix& d, std::mt19937_64& rng) {
  RepairResult res{std::move(g), {}, 0};
  Network& net = res.network;
  const std::size_t guard_max = 20 * net.capacity() + 1000;
  std::size_t guard = 0;

  // Phase 1: fill to k-regular.
  while (net.edge_count() < net.capacity()) {
    if (++guard > guard_max) {
      throw std::logic_error("repair fill did not converge");
    }
    std::vector<int> outs = deficient_out(net);
    std::vector<int> ins = deficient_in(net);

    auto add_simple = [&](int u, int v) {
      net.add_edge(u, v);
      res.log.push_back({"fill", {}, {{u, v}}});
      ++res.fill_edges;
    };

    bool done = false;
    for (int att = 0; att < 64 && !done; ++att) {
      int u = outs[rand_index(rng, outs.size())];
      int v = ins[rand_index(rng, ins.size())];
      if (u != v && !net.has_edge(u, v)) {
        add_simple(u, v);
        done = true;
      }
    }
    if (done) continue;

    // Exhaustive scan for a simple pair before falling back to swaps.
    std::vector<std::pair<int, int>> simple;
    for (int u : outs) {
      for (int v : ins) {
        if (u != v && !net.has_edge(u, v)) simple.emplace_back(u, v);
      }
    }
    if (!simple.empty()) {
      auto [u, v] = simple[rand_index(rng, simple.size())];
      add_simple(u, v);
      continue;
    }

    // Degree-preserving 2-swap: remove (a,b), add (a,v) and (u,b). Also
    // covers the u == v case (one node deficient on both sides).
    bool swapped = false;
    for (int att = 0; att < 512 && !swapped; ++att) {
      int u = outs[rand_index(rng, outs.size())];
      int v = ins[rand_index(rng, ins.size())];
      auto edge = random_edge(net, rng);
      if (!edge) break;
      auto [a, b] = *edge;
      if (a == v || b == u) continue;
      // Prefer swaps that keep the graph simple; relax after some attempts.
      if (att < 256 && (net.has_edge(a, v) || net.has_edge(u, b))) continue;
      net.remove_edge(a, b);
      net.add_edge(a, v);
      net.add_edge(u, b);
      res.log.push_back({"fill-swap", {{a, b}}, {{a, v}, {u, b}}});
      ++res.fill_edges;
      swapped = true;
    }
    if (swapped) continue;

    // Last resort: a parallel edge between distinct deficient nodes.
    std::vector<std::pair<int, int>> pairs;
    for (int u : outs) {
      for (int v : ins) {
        if (u != v) pairs.emplace_back(u, v);
      }
    }
    if (pairs.empty()) {
      throw std::logic_error("repair: no addable pair and no usable swap");
    }
    auto [u, v] = pairs[rand_index(rng, pairs.size())];
    net.add_edge(u, v);
    res.log.push_back({"fill-parallel", {}, {{u, v}}});
    ++res.fill_edges;
  }

  // Phase 2: merge strongly connected components by cross-swapping each
  // pair's minimum-weight edges (weight = demand probability, 0 for fill).
  for (;;) {
    auto scc = strongly_connected_components(net);
    if (scc.count() <= 1) break;
    auto min_edge = [&](int comp) {
      double best_w = std::numeric_limits<double>::infinity();
      std::pair<int, int> best{-1, -1};
      for (int u : scc.members[comp]) {
        for (int v : net.out_neighbors(u)) {
          if (scc.component[v] != comp) continue;
          double w = d.prob(u, v);
          if (w < best_w) {
            best_w = w;
            best = {u, v};
          }
        }
      }
      return best;
    };
    auto [u1, v1] = min_edge(0);
    auto [u2, v2] = min_edge(1);
    net.remove_edge(u1, v1);
    net.remove_edge(u2, v2);
    net.add_edge(u1, v2);
    net.add_edge(u2, v1);
    res.log.push_back(
        {"connect-swap", {{u1, v1}, {u2, v2}}, {{u1, v2}, {u2, v1}}});
  }
  return res;
}

Network repair(const Network& g, const DemandMatrix& d, std::uint64_t seed) {
  auto rng = make_rng(seed, RngStream::Fill);
  return repair(Network(g), d, rng).network;
}

namespace {

BuildOutcome finish_build(Network greedy, RepairResult rep,
                          std::vector<DemandEntry> greedy_admitted,
                          bool filter_by_edge) {
  std::vector<DemandEntry> admitted;
  for (const auto& e : greedy_admitted) {
    if (!filter_by_edge || rep.network.has_edge(e.src, e.dst)) {
      admitted.push_back(e);
    }
  }
  if (filter_by_edge) {
    for (const auto& e : admitted) {
      assert(rep.network.dist(e.src, e.dst) == 1);
      (void)e;
    }
  }
  MatchingSet ms = decompose_to_matchings(rep.network);
  return BuildOutcome{std::move(rep.network), std::move(ms),
                      std::move(greedy),      std::move(admitted),
                      rep.fill_edges,         std::move(rep.log)};
}

}  // namespace

BuildOutcome greedy_matching(const DemandMatrix& d, int n, int k,
                             std::uint64_t seed) {
  Network net(n, k);
  auto sort_rng = make_rng(seed, RngStream::SortTies);
  auto fill_rng = make_rng(seed, RngStream::Fill);
  std::vector<DemandEntry> greedy_admitted;
  for (const auto& e : sorted_requests(d, sort_rng)) {
    if (net.out_degree(e.src) < k && net.in_degree(e.dst) < k) {
      net.add_edge(e.src, e.dst);
      greedy_admitted.push_back(e);
    }
  }
  Network greedy = net;
  auto rep = repair(std::move(net), d, fill_rng);
  return finish_build(std::move(greedy), std::move(rep),
                      std::move(greedy_admitted), /*filter_by_edge=*/true);
}

BuildOutcome greedy_ego_trees(const DemandMatrix& d, int n, int k,
                              std::uint64_t seed) {
  Network net(n, k);
  auto sort_rng = make_rng(seed, RngStream::SortTies);
  auto bfs_rng = make_rng(seed, RngStream::BfsTies);
  auto fill_rng = make_rng(seed, RngStream::Fill);
  std::vector<DemandEntry> greedy_admitted;
  for (const auto& e : sorted_requests(d, sort_rng)) {
    if (net.edge_count() >= net.capacity()) break;
    int cur = net.dist(e.src, e.dst);
    auto x = nearest_available(net, e.src, Direction::Forward, bfs_rng);
    if (!x) continue;
    auto y = nearest_available(net, e.dst, Direction::Backward, bfs_rng);
    if (!y) continue;
    if (x->node == y->node || net.has_edge(x->node, y->node)) continue;
    if (x->distance + y->distance + 1 < cur) {
      net.add_edge(x->node, y->node);
      assert(net.dist(e.src, e.dst) < cur);
      greedy_admitted.push_back(e);
    }
  }
  Network greedy = net;
  auto rep = repair(std::move(net), d, fill_rng);
  return finish_build(std::move(greedy), std::move(rep),
                      std::move(greedy_admitted), /*filter_by_edge=*/false);
}

namespace {

std::uint64_t edge_key(int u, int v) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
         static_cast<std::uint32_t>(v);
}

// One random perfect matching on the bipartite graph of still-allowed pairs
// (no self-loops, no pair already used by a previous matching). Random
// greedy assignment, then Kuhn-style augmentation for the leftovers; a
// perfect matching always exists while fewer than n-1 matchings are taken.
struct DisjointMatchingSampler {
  int n;
  std::unordered_set<std::uint64_t>& used;
  std::mt19937_64& rng;
  std::vector<int> match_l, match_r;
  std::vector<char> visited;

  DisjointMatchingSampler(int nodes, std::unordered_set<std::uint64_t>& u,
                          std::mt19937_64& r)
      : n(nodes), used(u), rng(r), match_l(n, -1), match_r(n, -1) {}

  bool allowed(int v, int u) const {
    return v != u && used.find(edge_key(v, u)) == used.end();
  }

  bool augment(int v) {
    visited[v] = 1;
    std::size_t off = rand_index(rng, n);
    for (int i = 0; i < n; ++i) {
      int u = static_cast<int>((off + i) % n);
      if (!allowed(v, u)) continue;
      if (match_r[u] == -1) {
        match_l[v] = u;
        match_r[u] = v;
        return true;
      }
    }
    for (int i = 0; i < n; ++i) {
      int u = static_cast<int>((off + i) % n);
      if (!allowed(v, u)) continue;
      int w = match_r[u];
      if (!visited[w] && augment(w)) {
        match_l[v] = u;
        match_r[u] = v;
        return true;
      }
    }
    return false;
  }

  std::vector<int> sample() {
    std::vector<int> order(n), tgt(n);
    std::iota(order.begin(), order.end(), 0);
    std::iota(tgt.begin(), tgt.end(), 0);
    shuffle_vec(order, rng);
    shuffle_vec(tgt, rng);
    for (int v : order) {
      int u = tgt[v];
      if (allowed(v, u) && match_r[u] == -1) {
        match_l[v] = u;
        match_r[u] = v;
      }
    }
    for (int v : order) {
      if (match_l[v] != -1) continue;
      visited.assign(n, 0);
      if (!augment(v)) {
        throw std::logic_error("disjoint matching extraction failed");
      }
    }
    for (int v = 0; v < n; ++v) used.insert(edge_key(v, match_l[v]));
    return std::move(match_l);
  }
};

MatchingSet random_disjoint_matchings(int n, int k, std::mt19937_64& rng) {
  std::unordered_set<std::uint64_t> used;
  MatchingSet ms{n, k, {}};
  for (int j = 0; j < k; ++j) {
    DisjointMatchingSampler sampler(n, used, rng);
    ms.matchings.push_back(sampler.sample());
  }
  return ms;
}

}  // namespace

BuildOutcome random_expander(int n, int k, int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("expander trials must be >= 1");
  for (int retry = 0; retry < 5; ++retry) {
    auto rng = make_rng(seed, RngStream::Expander, retry);
    std::optional<MatchingSet> best_ms;
    double best_apl = std::numeric_limits<double>::infinity();
    for (int t = 0; t < trials; ++t) {
      MatchingSet ms = random_disjoint_matchings(n, k, rng);
      Network net = union_of_matchings(ms);
      if (strongly_connected_components(net).count() != 1) continue;
      double apl = all_to_all_apl(net);
      if (apl < best_apl) {
        best_apl = apl;
        best_ms = std::move(ms);
      }
    }
    if (best_ms) {
      Network net = union_of_matchings(*best_ms);
      Network copy = net;
      return BuildOutcome{std::move(net), std::move(*best_ms),
                          std::move(copy), {},
                          0,               {}};
    }
  }
  throw std::runtime_error(
      "random_expander: no strongly connected candidate after retries");
}

double weighted_apl(const Network& g, const DemandMatrix& d) {
  double total = 0.0;
  int cur_src = -1;
  std::vector<int> row;
  for (const auto& e : d.entries()) {  // sorted by (src,dst)
    if (e.src != cur_src) {
      cur_src = e.src;
      row = g.distances_from(cur_src);
    }
    if (row[e.dst] >= Network::kUnreachable) {
      throw std::runtime_error("weighted_apl: demand pair (" +
                               std::to_string(e.src) + "," +
                               std::to_string(e.dst) + ") is unreachable");
    }
    total += e.p * row[e.dst];
  }
  return total;
}

double all_to_all_apl(const Network& g) {
  const int n = g.n();
  long long total = 0;
  for (int s = 0; s < n; ++s) {
    auto row = g.distances_from(s);
    for (int v = 0; v < n; ++v) {
      if (v == s) continue;
      if (row[v] >= Network::kUnreachable) {
        throw std::runtime_error("all_to_all_apl: graph is not strongly "
                                 "connected");
      }
      total += row[v];
    }
  }
  return static_cast<double>(total) /
         (static_cast<double>(n) * (n - 1));
}

double star_optimal_apl(const DemandMatrix& d, int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (d.entries().empty()) {
    throw std::invalid_argument("star_optimal_apl: empty demand");
  }
  // Undirected support, deduplicated.
  std::unordered_set<std::uint64_t> seen;
  std::unordered_map<int, std::vector<int>> adj;
  std::vector<std::pair<int, int>> support;
  for (const auto& e : d.entries()) {
    int a = std::min(e.src, e.dst), b = std::max(e.src, e.dst);
    if (!seen.insert(edge_key(a, b)).second) continue;
    support.emplace_back(a, b);
    adj[a].push_back(b);
    adj[b].push_back(a);
  }

  std::unordered_map<int, int> comp;
  int comp_count = 0;
  for (const auto& [node, _] : adj) {
    if (comp.count(node)) continue;
    std::vector<int> stack{node};
    comp[node] = comp_count;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : adj[v]) {
        if (!comp.count(w)) {
          comp[w] = comp_count;
          stack.push_back(w);
        }
      }
    }
    ++comp_count;
  }

  // Per component: the center must be incident to every support edge.
  std::vector<std::size_t> comp_edges(comp_count, 0);
  std::unordered_map<int, std::size_t> incident;
  for (auto [a, b] : support) {
    ++comp_edges[comp.at(a)];
    ++incident[a];
    ++incident[b];
  }
  std::vector<int> center(comp_count, -1);
  for (const auto& [node, cnt] : incident) {
    int c = comp.at(node);
    if (cnt == comp_edges[c]) {
      if (center[c] == -1 || node < center[c]) center[c] = node;
    }
  }
  for (int c = 0; c < comp_count; ++c) {
    if (center[c] == -1) {
      throw std::invalid_argument(
          "star_optimal_apl: demand graph is not a disjoint union of stars");
    }
  }

  // Leaf weight = total probability to and from the center.
  std::vector<std::unordered_map<int, double>> leaf_w(comp_count);
  for (const auto& e : d.entries()) {
    int c = comp.at(e.src);
    int leaf = e.src == center[c] ? e.dst : e.src;
    leaf_w[c][leaf] += e.p;
  }

  double total = 0.0;
  for (int c = 0; c < comp_count; ++c) {
    std::vector<double> weights;
    weights.reserve(leaf_w[c].size());
    for (const auto& [_, w] : leaf_w[c]) weights.push_back(w);
    std::sort(weights.rbegin(), weights.rend());
    long long depth = 1, cap = k, used = 0;
    for (double w : weights) {
      if (used == cap) {
        ++depth;
        used = 0;
        if (cap <= (1LL << 40)) cap *= k;
      }
      total += w * static_cast<double>(depth);
      ++used;
    }
  }
  return total;
}

}  // namespace leafspine
