#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

namespace leafspine {

struct Request {
  int src;
  int dst;
};

struct Trace {
  int n = 0;
  std::vector<Request> requests;
  std::size_t self_loops_dropped = 0;

  std::size_t size() const { return requests.size(); }
};

struct DemandEntry {
  int src;
  int dst;
  double p;
};

// Empirical probability distribution over directed (src,dst) pairs. Entries
// are kept sorted by (src,dst); all probabilities are positive and sum to 1.
class DemandMatrix {
 public:
  DemandMatrix() = default;
  explicit DemandMatrix(std::vector<DemandEntry> entries);

  const std::vector<DemandEntry>& entries() const { return entries_; }
  std::size_t support_size() const { return entries_.size(); }
  double prob(int u, int v) const;

 private:
  std::vector<DemandEntry> entries_;
  std::unordered_map<std::uint64_t, double> index_;
};

struct TraceStats {
  std::size_t length = 0;
  int nodes = 0;  // distinct node ids appearing in the trace
  std::size_t edges = 0;  // distinct directed pairs
  // Per-node statistic is max(in-degree, out-degree) in the demand graph,
  // aggregated over the nodes that appear.
  double avg_degree = 0.0;
  int min_degree = 0;
  int max_degree = 0;
  std::size_t self_loops_dropped = 0;
};

// One request per line, "SRC DST" or "SRC,DST", 0-based decimal ids; lines
// starting with '#' and blank lines are ignored. Self-loop requests are
// dropped and counted. Malformed lines and ids outside [0,n) raise
// std::runtime_error with the line number.
Trace ingest_trace(std::istream& in, int n);
Trace load_trace(const std::string& path, int n);
void write_trace(const Trace& t, std::ostream& out);

// Empirical distribution of requests [begin, end); throws on empty range.
DemandMatrix build_demand(const Trace& t, std::size_t begin, std::size_t end);

// Non-increasing by probability; runs of equal probability are permuted
// uniformly at random (deterministic for a fixed generator state).
std::vector<DemandEntry> sorted_requests(const DemandMatrix& d,
                                         std::mt19937_64& rng);

// Shannon entropy of the joint pair distribution, base k.
double entropy(const DemandMatrix& d, int base_k);

TraceStats trace_stats(const Trace& t);

// Disjoint bidirectional stars: star chosen uniformly, direction uniformly,
// leaf i with probability proportional to 1/i when zipf is set (uniform
// otherwise). n = stars * (leaves + 1); centers sit at s*(leaves+1).
Trace generate_stars(int stars, int leaves, std::size_t length, bool zipf,
                     std::uint64_t seed);

// Demand whose graph is a directed forest: every node is the destination of
// at most one pair and the undirected support is acyclic. Weights are random
// positive, normalized.
DemandMatrix generate_forest_demand(int n, int arity, std::uint64_t seed);

// Uniformly random ordered pairs (no self-loops).
Trace generate_uniform_pairs(int n, std::size_t length, std::uint64_t seed);

// Sources and destinations drawn from a Zipf law with the given exponent.
Trace generate_zipf_pairs(int n, std::size_t length, double exponent,
                          std::uint64_t seed);

}  // namespace leafspine
