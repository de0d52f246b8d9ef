#include "leafspine/online.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include "leafspine/rng.hpp"

namespace leafspine {

namespace {

std::uint64_t pair_key(int u, int v) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
         static_cast<std::uint32_t>(v);
}

std::size_t multiset_diff(const Network& a, const Network& b) {
  auto ea = a.edge_multiset();
  auto eb = b.edge_multiset();
  std::vector<std::pair<int, int>> sym;
  std::set_symmetric_difference(ea.begin(), ea.end(), eb.begin(), eb.end(),
                                std::back_inserter(sym));
  return sym.size();
}

void check_request_bounds(const Trace& t, const OnlineConfig& cfg) {
  if (t.n > cfg.n) {
    throw std::invalid_argument("trace node bound exceeds configured n");
  }
  if (cfg.R < 1) throw std::invalid_argument("update rate R must be >= 1");
  if (cfg.W < 1) throw std::invalid_argument("window size W must be >= 1");
}

RunRecord make_record(const OnlineConfig& cfg, const std::string& algo) {
  RunRecord rec;
  rec.algo = algo.empty() ? cfg.algo : algo;
  rec.trace_name = cfg.trace_name;
  rec.n = cfg.n;
  rec.k = cfg.k;
  rec.R = cfg.R;
  rec.W = cfg.W;
  rec.seed = cfg.seed;
  return rec;
}

}  // namespace

std::uint64_t derive_update_seed(std::uint64_t master_seed, std::size_t t) {
  return mix64(master_seed ^ mix64(static_cast<std::uint64_t>(t) +
                                   static_cast<std::uint64_t>(
                                       RngStream::Update)));
}

RunRecord run_meta(const Trace& trace, const OnlineConfig& cfg,
                   const UpdateFn& update) {
  check_request_bounds(trace, cfg);
  RunRecord rec = make_record(cfg, cfg.algo);

  Network net =
      random_expander(cfg.n, cfg.k, cfg.expander_trials, cfg.seed).network;
  DistanceCache cache(net);
  const std::size_t m = trace.size();
  rec.costs.reserve(m);
  for (std::size_t t = 1; t <= m; ++t) {
    const auto& r = trace.requests[t - 1];
    int cost = cache.dist(r.src, r.dst);
    if (cost >= Network::kUnreachable) {
      throw std::logic_error("served request on a disconnected network");
    }
    rec.costs.push_back(cost);
    if (t % cfg.R == 0) {
      std::size_t w = std::min(cfg.W, t);
      DemandMatrix window = build_demand(trace, t - w, t);
      Network next = update(window, cfg.n, cfg.k, cfg.seed, t);
      if (!next.is_complete()) {
        throw std::runtime_error(
            "update returned a non-complete network at t=" +
            std::to_string(t));
      }
      rec.reconfigs.push_back({t, multiset_diff(net, next)});
      net = std::move(next);
      cache.reset(net);
    }
  }
  return rec;
}

Network egotrees_update(const DemandMatrix& d, int n, int k,
                        std::uint64_t master_seed, std::size_t t) {
  if (d.entries().empty()) {
    throw std::invalid_argument("egotrees_update: empty window demand");
  }
  return greedy_ego_trees(d, n, k, derive_update_seed(master_seed, t)).network;
}

Network kmatching_update(const DemandMatrix& d, int n, int k,
                         std::uint64_t master_seed, std::size_t t) {
  if (d.entries().empty()) {
    throw std::invalid_argument("kmatching_update: empty window demand");
  }
  return greedy_matching(d, n, k, derive_update_seed(master_seed, t)).network;
}

RunRecord run_bma(const Trace& trace, const OnlineConfig& cfg,
                  const BmaConfig& bma) {
  check_request_bounds(trace, cfg);
  if (bma.alpha < 1 || bma.threshold < 1) {
    throw std::invalid_argument("bma alpha and threshold must be >= 1");
  }
  RunRecord rec = make_record(cfg, cfg.algo.empty() ? "bma" : cfg.algo);
  rec.notes = "reconstructed-online-bma";

  Network expander =
      random_expander(cfg.n, cfg.k, cfg.expander_trials, cfg.seed).network;
  DistanceCache dist(expander);

  Network cache(cfg.n, cfg.k);  // the link cache, degree-bounded by k
  std::unordered_map<std::uint64_t, int> miss_count;
  std::unordered_map<std::uint64_t, std::uint64_t> hits_since_insert;

  auto evict_min = [&](const std::vector<int>& slots, bool out_side,
                       int anchor) {
    // slots are the cached neighbors of anchor on the full side
    int victim = -1;
    std::uint64_t victim_hits = 0;
    for (int other : slots) {
      auto key =
          out_side ? pair_key(anchor, other) : pair_key(other, anchor);
      std::uint64_t h = hits_since_insert[key];
      if (victim == -1 || h < victim_hits ||
          (h == victim_hits && other < victim)) {
        victim = other;
        victim_hits = h;
      }
    }
    int u = out_side ? anchor : victim;
    int v = out_side ? victim : anchor;
    cache.remove_edge(u, v);
    hits_since_insert.erase(pair_key(u, v));
    miss_count[pair_key(u, v)] = 0;
  };

  const std::size_t m = trace.size();
  rec.costs.reserve(m);
  for (std::size_t t = 1; t <= m; ++t) {
    const auto& r = trace.requests[t - 1];
    if (cache.has_edge(r.src, r.dst)) {
      rec.costs.push_back(1);
      ++hits_since_insert[pair_key(r.src, r.dst)];
      continue;
    }
    rec.costs.push_back(dist.dist(r.src, r.dst));
    int& c = miss_count[pair_key(r.src, r.dst)];
    if (++c < bma.threshold) continue;

    std::size_t evictions = 0;
    if (cache.out_degree(r.src) == cfg.k) {
      evict_min(cache.out_neighbors(r.src), /*out_side=*/true, r.src);
      ++evictions;
    }
    if (cache.in_degree(r.dst) == cfg.k) {
      evict_min(cache.in_neighbors(r.dst), /*out_side=*/false, r.dst);
      ++evictions;
    }
    cache.add_edge(r.src, r.dst);
    hits_since_insert[pair_key(r.src, r.dst)] = 0;
    c = 0;
    rec.reconfigs.push_back({t, 1 + evictions});
  }
  return rec;
}

RunRecord run_static(const Trace& trace, const Network& g,
                     const OnlineConfig& cfg) {
  check_request_bounds(trace, cfg);
  if (!g.is_complete()) {
    throw std::invalid_argument("run_static requires a complete network");
  }
  RunRecord rec = make_record(cfg, cfg.algo);
  DistanceCache cache(g);
  rec.costs.reserve(trace.size());
  for (const auto& r : trace.requests) {
    rec.costs.push_back(cache.dist(r.src, r.dst));
  }
  return rec;
}

}  // namespace leafspine
