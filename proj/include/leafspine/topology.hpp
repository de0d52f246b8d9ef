#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "leafspine/demand.hpp"
#include "leafspine/matching.hpp"
#include "leafspine/network.hpp"

namespace leafspine {

struct RepairAction {
  std::string kind;  // "fill", "fill-parallel", "fill-swap", "connect-swap"
  std::vector<std::pair<int, int>> removed;
  std::vector<std::pair<int, int>> added;
};

nlohmann::json repair_log_to_json(const std::vector<RepairAction>& log);

struct BuildOutcome {
  Network network;         // final: k-regular, strongly connected
  MatchingSet matchings;   // union equals network's edge multiset
  Network greedy_network;  // state after the greedy phase, before repair
  // Demand pairs the greedy phase served with a new edge. For
  // greedy_matching these are direct edges of the final network.
  std::vector<DemandEntry> admitted;
  std::size_t fill_edges = 0;
  std::vector<RepairAction> repair_log;
};

// Adds each demand pair (s,d), most frequent first, whenever both degree
// slots are free; then repairs to a k-regular strongly connected network and
// decomposes it. Every admitted pair ends at distance 1.
BuildOutcome greedy_matching(const DemandMatrix& d, int n, int k,
                             std::uint64_t seed);

// For each demand pair (s,d), most frequent first: x = nearest out-available
// node reachable from s, y = nearest in-available node reaching d; the edge
// (x,y) is added iff it is addable and dist(s,x) + dist(y,d) + 1 improves on
// the current dist(s,d). Stops after n*k edges or after all pairs, then
// repairs and decomposes.
BuildOutcome greedy_ego_trees(const DemandMatrix& d, int n, int k,
                              std::uint64_t seed);

struct RepairResult {
  Network network;
  std::vector<RepairAction> log;
  std::size_t fill_edges = 0;
};

// Fill to k-regular with random edges (degree-preserving 2-swaps, then
// parallel edges, when no simple pair is left), then merge strongly
// connected components by cross-swapping their minimum-demand-weight edges.
RepairResult repair(Network g, const DemandMatrix& d, std::mt19937_64& rng);
Network repair(const Network& g, const DemandMatrix& d, std::uint64_t seed);

// Best of `trials` unions of k random pairwise-disjoint self-loop-free
// matchings, judged by all-to-all average path length; candidates that are
// not strongly connected are discarded.
BuildOutcome random_expander(int n, int k, int trials, std::uint64_t seed);

// Sum over demand entries of p(u,v) * dist(u,v); throws if any demand pair
// is unreachable.
double weighted_apl(const Network& g, const DemandMatrix& d);

// Unweighted average distance over all ordered pairs u != v.
double all_to_all_apl(const Network& g);

// Closed-form optimum for a demand whose graph is a disjoint union of
// stars: per star, leaves sorted by weight occupy complete-k-ary-tree
// positions in BFS order. Throws on non-star demand.
double star_optimal_apl(const DemandMatrix& d, int k);

}  // namespace leafspine
