#include "leafspine/demand.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "leafspine/rng.hpp"

namespace leafspine {

namespace {

std::uint64_t pair_key(int u, int v) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
         static_cast<std::uint32_t>(v);
}

}  // namespace

DemandMatrix::DemandMatrix(std::vector<DemandEntry> entries)
    : entries_(std::move(entries)) {
  double total = 0.0;
  for (const auto& e : entries_) {
    if (e.src == e.dst) {
      throw std::invalid_argument("demand matrix may not contain self-loops");
    }
    if (e.p <= 0.0) {
      throw std::invalid_argument("demand probabilities must be positive");
    }
    total += e.p;
  }
  if (!entries_.empty() && std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("demand probabilities must sum to 1");
  }
  std::sort(entries_.begin(), entries_.end(), [](const auto& a, const auto& b) {
    return std::tie(a.src, a.dst) < std::tie(b.src, b.dst);
  });
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    if (entries_[i - 1].src == entries_[i].src &&
        entries_[i - 1].dst == entries_[i].dst) {
      throw std::invalid_argument("duplicate demand entry");
    }
  }
  index_.reserve(entries_.size());
  for (const auto& e : entries_) index_[pair_key(e.src, e.dst)] = e.p;
}

double DemandMatrix::prob(int u, int v) const {
  auto it = index_.find(pair_key(u, v));
  return it == index_.end() ? 0.0 : it->second;
}

Trace ingest_trace(std::istream& in, int n) {
  if (n < 2) throw std::invalid_argument("expected node count must be >= 2");
  Trace t;
  t.n = n;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    long long src, dst;
    std::string extra;
    if (!(ls >> src >> dst) || (ls >> extra)) {
      throw std::runtime_error("malformed trace line " +
                               std::to_string(lineno) + ": '" + line + "'");
    }
    if (src < 0 || src >= n || dst < 0 || dst >= n) {
      throw std::runtime_error("node id outside [0," + std::to_string(n) +
                               ") at trace line " + std::to_string(lineno));
    }
    if (src == dst) {
      ++t.self_loops_dropped;
      continue;
    }
    t.requests.push_back({static_cast<int>(src), static_cast<int>(dst)});
  }
  return t;
}

Trace load_trace(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file: " + path);
  return ingest_trace(in, n);
}

void write_trace(const Trace& t, std::ostream& out) {
  for (const auto& r : t.requests) {
    out << r.src << ' ' << r.dst << '\n';
  }
}

DemandMatrix build_demand(const Trace& t, std::size_t begin, std::size_t end) {
  if (begin >= end || end > t.size()) {
    throw std::invalid_argument("demand window is empty or out of range");
  }
  std::unordered_map<std::uint64_t, std::size_t> counts;
  for (std::size_t i = begin; i < end; ++i) {
    ++counts[pair_key(t.requests[i].src, t.requests[i].dst)];
  }
  const double denom = static_cast<double>(end - begin);
  std::vector<DemandEntry> entries;
  entries.reserve(counts.size());
  for (const auto& [key, count] : counts) {
    entries.push_back({static_cast<int>(key >> 32),
                       static_cast<int>(key & 0xffffffffu),
                       static_cast<double>(count) / denom});
  }
  return DemandMatrix(std::move(entries));
}

std::vector<DemandEntry> sorted_requests(const DemandMatrix& d,
                                         std::mt19937_64& rng) {
  std::vector<DemandEntry> order = d.entries();
  // Shuffle first, then stable-sort: equal-probability runs end up in a
  // uniformly random permutation.
  shuffle_vec(order, rng);
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.p > b.p; });
  return order;
}

double entropy(const DemandMatrix& d, int base_k) {
  if (base_k < 2) throw std::invalid_argument("entropy base must be >= 2");
  double h = 0.0;
  for (const auto& e : d.entries()) {
    h -= e.p * std::log(e.p);
  }
  return h / std::log(static_cast<double>(base_k));
}

TraceStats trace_stats(const Trace& t) {
  TraceStats s;
  s.length = t.size();
  s.self_loops_dropped = t.self_loops_dropped;
  std::set<std::pair<int, int>> edges;
  std::vector<int> indeg(t.n, 0), outdeg(t.n, 0);
  std::vector<char> appears(t.n, 0);
  for (const auto& r : t.requests) {
    appears[r.src] = appears[r.dst] = 1;
    if (edges.emplace(r.src, r.dst).second) {
      ++outdeg[r.src];
      ++indeg[r.dst];
    }
  }
  s.edges = edges.size();
  long long total = 0;
  bool first = true;
  for (int v = 0; v < t.n; ++v) {
    if (!appears[v]) continue;
    ++s.nodes;
    int deg = std::max(indeg[v], outdeg[v]);
    total += deg;
    if (first) {
      s.min_degree = s.max_degree = deg;
      first = false;
    } else {
      s.min_degree = std::min(s.min_degree, deg);
      s.max_degree = std::max(s.max_degree, deg);
    }
  }
  s.avg_degree = s.nodes == 0 ? 0.0 : static_cast<double>(total) / s.nodes;
  return s;
}

Trace generate_stars(int stars, int leaves, std::size_t length, bool zipf,
                     std::uint64_t seed) {
  if (stars < 1 || leaves < 1) {
    throw std::invalid_argument("stars and leaves must be positive");
  }
  if (length < 1) throw std::invalid_argument("trace length must be >= 1");
  const int per_star = leaves + 1;
  Trace t;
  t.n = stars * per_star;

  // Cumulative leaf weights, shared by all stars.
  std::vector<double> cum(leaves);
  double total = 0.0;
  for (int i = 1; i <= leaves; ++i) {
    total += zipf ? 1.0 / i : 1.0;
    cum[i - 1] = total;
  }
  for (double& c : cum) c /= total;

  auto rng = make_rng(seed, RngStream::Generator);
  t.requests.reserve(length);
  for (std::size_t i = 0; i < length; ++i) {
    int star = static_cast<int>(rand_index(rng, stars));
    bool center_to_leaf = (rng() & 1) != 0;
    double u = rand_unit(rng);
    int leaf = static_cast<int>(
        std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
    if (leaf >= leaves) leaf = leaves - 1;
    int center = star * per_star;
    int leaf_id = center + 1 + leaf;
    if (center_to_leaf) {
      t.requests.push_back({center, leaf_id});
    } else {
      t.requests.push_back({leaf_id, center});
    }
  }
  return t;
}

DemandMatrix generate_forest_demand(int n, int arity, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("forest demand needs n >= 2");
  if (arity < 1) throw std::invalid_argument("arity bound must be >= 1");
  auto rng = make_rng(seed, RngStream::Generator);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  shuffle_vec(order, rng);

  std::vector<int> out_count(n, 0);
  std::vector<int> placed{order[0]};
  std::vector<DemandEntry> entries;
  for (int i = 1; i < n; ++i) {
    int node = order[i];
    // Node 1 always attaches so the demand is never empty.
    bool new_root = i > 1 && rand_unit(rng) < 0.15;
    if (!new_root) {
      std::vector<int> candidates;
      for (int p : placed) {
        if (out_count[p] < arity) candidates.push_back(p);
      }
      int parent = candidates[rand_index(rng, candidates.size())];
      ++out_count[parent];
      entries.push_back({parent, node, rand_unit(rng) + 0.01});
    }
    placed.push_back(node);
  }
  double total = 0.0;
  for (const auto& e : entries) total += e.p;
  for (auto& e : entries) e.p /= total;
  return DemandMatrix(std::move(entries));
}

Trace generate_uniform_pairs(int n, std::size_t length, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("need n >= 2");
  auto rng = make_rng(seed, RngStream::Generator);
  Trace t;
  t.n = n;
  t.requests.reserve(length);
  for (std::size_t i = 0; i < length; ++i) {
    int src = static_cast<int>(rand_index(rng, n));
    int dst = static_cast<int>(rand_index(rng, n - 1));
    if (dst >= src) ++dst;
    t.requests.push_back({src, dst});
  }
  return t;
}

Trace generate_zipf_pairs(int n, std::size_t length, double exponent,
                          std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("need n >= 2");
  if (exponent <= 0.0) throw std::invalid_argument("exponent must be > 0");
  auto rng = make_rng(seed, RngStream::Generator);
  std::vector<double> cum(n);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    total += std::pow(static_cast<double>(i + 1), -exponent);
    cum[i] = total;
  }
  for (double& c : cum) c /= total;
  auto sample = [&]() {
    double u = rand_unit(rng);
    int v = static_cast<int>(std::lower_bound(cum.begin(), cum.end(), u) -
                             cum.begin());
    return std::min(v, n - 1);
  };
  Trace t;
  t.n = n;
  t.requests.reserve(length);
  for (std::size_t i = 0; i < length; ++i) {
    int src = sample();
    int dst = sample();
    while (dst == src) dst = sample();
    t.requests.push_back({src, dst});
  }
  return t;
}

}  // namespace leafspine
