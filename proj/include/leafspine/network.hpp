#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace leafspine {

class SelfLoopError : public std::invalid_argument {
 public:
  explicit SelfLoopError(int v)
      : std::invalid_argument("self-loop edge (" + std::to_string(v) + "," +
                              std::to_string(v) + ") is not allowed") {}
};

class DegreeFullError : public std::invalid_argument {
 public:
  DegreeFullError(int v, const char* side)
      : std::invalid_argument(std::string(side) + "-degree of node " +
                              std::to_string(v) + " is already at the bound") {}
};

// Degree-bounded directed multigraph: at most k out-edges and k in-edges per
// node, no self-loops. Parallel edges are allowed; distance queries treat
// them as one.
class Network {
 public:
  // Sentinel for "no directed path"; chosen so that saturating sums of a few
  // distances never overflow.
  static constexpr int kUnreachable = std::numeric_limits<int>::max() / 4;

  Network(int n, int k);

  int n() const { return n_; }
  int k() const { return k_; }
  int out_degree(int v) const { return static_cast<int>(out_[v].size()); }
  int in_degree(int v) const { return static_cast<int>(in_[v].size()); }
  std::size_t edge_count() const { return edges_; }
  std::size_t capacity() const {
    return static_cast<std::size_t>(n_) * static_cast<std::size_t>(k_);
  }

  void add_edge(int u, int v);
  // Removes one copy of (u,v); throws std::invalid_argument if absent.
  void remove_edge(int u, int v);
  bool has_edge(int u, int v) const;

  const std::vector<int>& out_neighbors(int v) const { return out_[v]; }
  const std::vector<int>& in_neighbors(int v) const { return in_[v]; }

  bool is_regular() const;
  // k-regular and strongly connected.
  bool is_complete() const;

  // Edge multiset sorted by (u,v); parallel copies appear repeatedly.
  std::vector<std::pair<int, int>> edge_multiset() const;

  // BFS hop counts from s to every node; kUnreachable where no path exists.
  std::vector<int> distances_from(int s) const;
  int dist(int s, int d) const;

 private:
  void check_node(int v) const;

  int n_;
  int k_;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
  std::size_t edges_ = 0;
};

enum class Direction { Forward, Backward };

struct NearestHit {
  int node;
  int distance;
};

// Forward: nearest node (by BFS over out-edges from start) whose out-degree
// is below k; Backward: nearest node over reversed edges whose in-degree is
// below k. The start node itself qualifies at distance 0. Ties at equal
// distance are broken uniformly at random with tie_rng.
std::optional<NearestHit> nearest_available(const Network& g, int start,
                                            Direction dir,
                                            std::mt19937_64& tie_rng);

struct SccPartition {
  std::vector<int> component;             // node -> component id
  std::vector<std::vector<int>> members;  // component id -> nodes
  int count() const { return static_cast<int>(members.size()); }
};

// Tarjan; component ids come out in reverse topological order of the
// condensation (an edge between components always goes from a higher id to a
// lower one).
SccPartition strongly_connected_components(const Network& g);

// Per-epoch memo of BFS rows; reset whenever the network is replaced.
class DistanceCache {
 public:
  explicit DistanceCache(const Network& g) { reset(g); }
  void reset(const Network& g);
  int dist(int s, int d);

 private:
  const Network* g_ = nullptr;
  std::vector<std::vector<int>> rows_;
};

}  // namespace leafspine
