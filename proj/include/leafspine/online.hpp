#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "leafspine/demand.hpp"
#include "leafspine/network.hpp"
#include "leafspine/topology.hpp"

namespace leafspine {

struct OnlineConfig {
  int n = 0;
  int k = 4;
  std::size_t R = 10000;   // requests between reconfigurations
  std::size_t W = 20000;   // demand estimation window
  std::uint64_t seed = 0;
  int expander_trials = 10;
  std::string algo;        // config echo for reports
  std::string trace_name;
};

// Directed reconstruction of an online b-matching link cache. alpha is the
// cost parameter; the insertion threshold defaults to alpha. These values
// and the eviction policy are a behavioral reconstruction, not taken from a
// published reference implementation, and are configurable for that reason.
struct BmaConfig {
  int alpha = 6;
  int threshold = 6;
};

struct ReconfigEvent {
  std::size_t t;              // request index (1-based) after which N changed
  std::size_t edges_changed;  // symmetric-difference size of edge multisets
};

struct RunRecord {
  std::string algo;
  std::string trace_name;
  int n = 0;
  int k = 0;
  std::size_t R = 0;
  std::size_t W = 0;
  std::uint64_t seed = 0;
  std::vector<int> costs;  // served path length per request, trace order
  std::vector<ReconfigEvent> reconfigs;
  std::string notes;
};

using UpdateFn = std::function<Network(const DemandMatrix& window_demand,
                                       int n, int k, std::uint64_t master_seed,
                                       std::size_t t)>;

// The serve/update loop: N(1) is a seeded random expander; request t is
// served at cost dist_{N(t)}(s_t,d_t); whenever t = 0 mod R the update
// function replaces N with a complete network built from the demand of the
// last min(W,t) requests.
RunRecord run_meta(const Trace& t, const OnlineConfig& cfg,
                   const UpdateFn& update);

Network egotrees_update(const DemandMatrix& d, int n, int k,
                        std::uint64_t master_seed, std::size_t t);
Network kmatching_update(const DemandMatrix& d, int n, int k,
                         std::uint64_t master_seed, std::size_t t);

// Link cache alongside a static expander: cached pairs cost 1, misses cost
// the expander distance and bump a per-pair counter; at the threshold the
// pair is cached, evicting the incident cached edge with the fewest hits
// since insertion when a degree slot is full. Not gated by R.
RunRecord run_bma(const Trace& t, const OnlineConfig& cfg,
                  const BmaConfig& bma);

// Serves the whole trace on a fixed complete network.
RunRecord run_static(const Trace& t, const Network& g,
                     const OnlineConfig& cfg);

// Deterministic per-update seed stream.
std::uint64_t derive_update_seed(std::uint64_t master_seed, std::size_t t);

}  // namespace leafspine
