#pragma once

#include <vector>

#include "json.hpp"
#include "leafspine/network.hpp"

namespace leafspine {

// k directed perfect matchings, one per spine switch. matchings[i][v] is the
// output port wired from input port v; the value v itself marks a parked
// port that contributes no network edge.
struct MatchingSet {
  int n = 0;
  int k = 0;
  std::vector<std::vector<int>> matchings;

  bool is_valid() const;
};

// Splits a k-regular multigraph into k perfect matchings whose multiset
// union is exactly the input's edge multiset. Views the graph as a k-regular
// bipartite graph (out-ports vs in-ports) and peels off one perfect matching
// per round via augmenting paths; regularity guarantees each round succeeds.
MatchingSet decompose_to_matchings(const Network& g);

Network union_of_matchings(const MatchingSet& m);

nlohmann::json matching_set_to_json(const MatchingSet& m);
MatchingSet matching_set_from_json(const nlohmann::json& j);

}  // namespace leafspine
