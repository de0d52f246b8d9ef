// End-to-end acceptance checks. Each criterion prints a single PASS/FAIL
// line; the process exits non-zero if any criterion fails.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "leafspine/evaluation.hpp"
#include "leafspine/online.hpp"
#include "leafspine/rng.hpp"
#include "leafspine/topology.hpp"

using namespace leafspine;
using Clock = std::chrono::steady_clock;

namespace {

int g_failed = 0;

void report(int id, const std::string& name, bool ok,
            const std::string& detail = "") {
  std::printf("criterion %02d %-42s %s%s%s\n", id, name.c_str(),
              ok ? "PASS" : "FAIL", detail.empty() ? "" : "  ",
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failed;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Network union_of_random_permutations(int n, int k, std::mt19937_64& rng) {
  Network g(n, k);
  std::vector<int> perm(n);
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (;;) {
      shuffle_vec(perm, rng);
      bool ok = true;
      for (int i = 0; i < n; ++i) {
        if (perm[i] == i) {
          ok = false;
          break;
        }
      }
      if (ok) break;
    }
    for (int i = 0; i < n; ++i) g.add_edge(i, perm[i]);
  }
  return g;
}

// 1000 random k-regular multigraphs decompose and reassemble exactly.
void criterion_decomposition() {
  auto start = Clock::now();
  auto rng = make_rng(101, RngStream::Generator);
  bool ok = true;
  for (int trial = 0; trial < 1000 && ok; ++trial) {
    int k = 1 + static_cast<int>(rand_index(rng, 8));
    int n = (k + 1) + static_cast<int>(rand_index(rng, 256 - k));
    Network g = union_of_random_permutations(n, k, rng);
    auto ms = decompose_to_matchings(g);
    ok = ms.is_valid() && static_cast<int>(ms.matchings.size()) == k &&
         union_of_matchings(ms).edge_multiset() == g.edge_multiset();
  }
  double secs = seconds_since(start);
  ok = ok && secs < 60.0;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "(1000 graphs, %.1fs)", secs);
  report(1, "matching decomposition round-trip", ok, buf);
}

DemandMatrix star_demand(int stars, int leaves, std::mt19937_64& rng) {
  std::vector<DemandEntry> entries;
  std::vector<double> w(static_cast<std::size_t>(stars) * leaves);
  double total = 0.0;
  for (auto& x : w) {
    x = rand_unit(rng) + 0.01;
    total += x;
  }
  std::size_t i = 0;
  for (int s = 0; s < stars; ++s) {
    int c = s * (leaves + 1);
    for (int l = 1; l <= leaves; ++l) {
      entries.push_back({c, c + l, w[i++] / total});
    }
  }
  return DemandMatrix(entries);
}

// Optimal complete-k-ary-tree depth per demand entry, heaviest first.
std::vector<int> optimal_star_depths(const DemandMatrix& d, int k) {
  std::map<int, std::vector<std::size_t>> stars;
  for (std::size_t i = 0; i < d.entries().size(); ++i) {
    stars[d.entries()[i].src].push_back(i);
  }
  std::vector<int> depth(d.entries().size(), 0);
  for (auto& [c, idx] : stars) {
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return d.entries()[a].p > d.entries()[b].p;
    });
    int level = 1;
    long long cap = k, used = 0;
    for (std::size_t i : idx) {
      if (used == cap) {
        ++level;
        cap *= k;
        used = 0;
      }
      depth[i] = level;
      ++used;
    }
  }
  return depth;
}

// 200 disjoint-star demands: the greedy phase reaches the closed-form
// optimum exactly (bitwise, via identical accumulation order).
void criterion_star_optimality() {
  auto rng = make_rng(202, RngStream::Generator);
  bool ok = true;
  for (int trial = 0; trial < 200 && ok; ++trial) {
    int k = 1 + static_cast<int>(rand_index(rng, 4));
    int leaves = 2 + static_cast<int>(rand_index(rng, 14));
    int max_stars = 256 / (leaves + 1);
    int stars = 1 + static_cast<int>(rand_index(rng, max_stars));
    int n = stars * (leaves + 1);
    if (n < k + 1) continue;
    DemandMatrix d = star_demand(stars, leaves, rng);
    auto b = greedy_ego_trees(d, n, k, rng());
    auto depths = optimal_star_depths(d, k);
    double achieved = weighted_apl(b.greedy_network, d);
    double oracle = 0.0;
    for (std::size_t i = 0; i < d.entries().size(); ++i) {
      if (b.greedy_network.dist(d.entries()[i].src, d.entries()[i].dst) !=
          depths[i]) {
        ok = false;
      }
      oracle += d.entries()[i].p * depths[i];
    }
    ok = ok && achieved == oracle;
  }
  report(2, "star-demand optimality (200 demands)", ok);
}

// 200 forest demands: greedy-phase weighted APL < H_k(demand) + 1.
void criterion_entropy_bound() {
  auto rng = make_rng(303, RngStream::Generator);
  bool ok = true;
  for (int trial = 0; trial < 200 && ok; ++trial) {
    int k = 2 + static_cast<int>(rand_index(rng, 3));
    int n = 16 + static_cast<int>(rand_index(rng, 113));
    DemandMatrix d = generate_forest_demand(n, k, rng());
    auto b = greedy_ego_trees(d, n, k, rng());
    ok = weighted_apl(b.greedy_network, d) < entropy(d, k) + 1.0;
  }
  report(3, "entropy+1 bound on forests (200 demands)", ok);
}

// BFS distances match brute-force relaxation on 100 random networks.
void criterion_distance_oracle() {
  auto rng = make_rng(404, RngStream::Generator);
  bool ok = true;
  for (int trial = 0; trial < 100 && ok; ++trial) {
    int k = 1 + static_cast<int>(rand_index(rng, 4));
    int n = (k + 1) + static_cast<int>(rand_index(rng, 64 - k));
    Network g(n, k);
    std::size_t want = rand_index(rng, g.capacity() + 1);
    for (std::size_t att = 0; att < 10 * want + 10; ++att) {
      if (g.edge_count() >= want) break;
      int u = static_cast<int>(rand_index(rng, n));
      int v = static_cast<int>(rand_index(rng, n));
      if (u == v || g.has_edge(u, v)) continue;
      if (g.out_degree(u) >= k || g.in_degree(v) >= k) continue;
      g.add_edge(u, v);
    }
    const long long inf = 1000000000;
    std::vector<std::vector<long long>> d(n, std::vector<long long>(n, inf));
    for (int v = 0; v < n; ++v) d[v][v] = 0;
    for (int u = 0; u < n; ++u) {
      for (int v : g.out_neighbors(u)) d[u][v] = 1;
    }
    for (bool changed = true; changed;) {
      changed = false;
      for (int i = 0; i < n; ++i) {
        for (int l = 0; l < n; ++l) {
          if (d[i][l] >= inf) continue;
          for (int j = 0; j < n; ++j) {
            if (d[i][l] + d[l][j] < d[i][j]) {
              d[i][j] = d[i][l] + d[l][j];
              changed = true;
            }
          }
        }
      }
    }
    for (int s = 0; s < n && ok; ++s) {
      auto row = g.distances_from(s);
      for (int t = 0; t < n; ++t) {
        long long want_d = d[s][t] >= inf ? Network::kUnreachable : d[s][t];
        if (row[t] != want_d) ok = false;
      }
    }
  }
  report(4, "BFS vs brute-force distances (100 nets)", ok);
}

struct StarsRuns {
  double ego = 0.0;
  double kmatch = 0.0;
  double expander = 0.0;
};

// Full-size stars trace: online ego trees < online k-matching < static
// expander, margins above 5% of the expander APL.
StarsRuns criterion_stars_ordering(const Trace& stars) {
  auto start = Clock::now();
  OnlineConfig cfg;
  cfg.n = 1024;
  cfg.k = 4;
  cfg.R = 10000;
  cfg.W = 20000;
  cfg.seed = 7;
  cfg.expander_trials = 10;
  const std::size_t warmup = cfg.W;

  StarsRuns out;
  Network expander =
      random_expander(cfg.n, cfg.k, cfg.expander_trials, cfg.seed).network;
  out.expander = apl(run_static(stars, expander, cfg), warmup);
  out.ego = apl(run_meta(stars, cfg, egotrees_update), warmup);
  out.kmatch = apl(run_meta(stars, cfg, kmatching_update), warmup);

  double margin = 0.05 * out.expander;
  double secs = seconds_since(start);
  bool ok = out.ego + margin < out.kmatch && out.kmatch + margin < out.expander &&
            out.expander >= 4.0 && out.expander <= 7.0 && secs < 600.0;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "(ego %.3f < kmatch %.3f < exp %.3f, %.0fs)",
                out.ego, out.kmatch, out.expander, secs);
  report(5, "stars-trace APL ordering", ok, buf);
  return out;
}

// The oblivious expander's APL barely moves across demand patterns.
void criterion_demand_independence(const Trace& stars, double stars_apl) {
  OnlineConfig cfg;
  cfg.n = 1024;
  cfg.k = 4;
  cfg.R = 10000;
  cfg.W = 20000;
  cfg.seed = 7;
  cfg.expander_trials = 10;
  Network expander =
      random_expander(cfg.n, cfg.k, cfg.expander_trials, cfg.seed).network;
  (void)stars;
  Trace uniform = generate_uniform_pairs(1024, 1000000, 7);
  Trace zipf = generate_zipf_pairs(1024, 1000000, 1.2, 7);
  double a = stars_apl;
  double b = apl(run_static(uniform, expander, cfg), cfg.W);
  double c = apl(run_static(zipf, expander, cfg), cfg.W);
  double lo = std::min({a, b, c}), hi = std::max({a, b, c});
  char buf[96];
  std::snprintf(buf, sizeof(buf), "(stars %.3f uniform %.3f zipf %.3f)", a, b,
                c);
  report(6, "expander APL is demand-independent", hi - lo < 0.2, buf);
}

// Every demand pair admitted by the degree-greedy constructor is a direct
// edge of the deployed network.
void criterion_single_hop() {
  auto rng = make_rng(707, RngStream::Generator);
  bool ok = true;
  for (int trial = 0; trial < 50 && ok; ++trial) {
    int k = 1 + static_cast<int>(rand_index(rng, 4));
    int n = 8 + static_cast<int>(rand_index(rng, 120));
    if (n < k + 1) continue;
    Trace t = generate_zipf_pairs(n, 600, 1.1, rng());
    DemandMatrix d = build_demand(t, 0, t.size());
    auto b = greedy_matching(d, n, k, rng());
    for (const auto& e : b.admitted) {
      if (b.network.dist(e.src, e.dst) != 1) ok = false;
    }
    if (b.admitted.empty()) ok = false;
  }
  report(7, "greedy matching single-hop guarantee", ok);
}

// R=4 over 10 requests: exactly two reconfigurations, and the network is
// untouched between them (costs replay exactly on the captured network).
void criterion_meta_loop() {
  Trace t = generate_uniform_pairs(12, 10, 5);
  OnlineConfig cfg;
  cfg.n = 12;
  cfg.k = 2;
  cfg.R = 4;
  cfg.W = 8;
  cfg.seed = 21;
  cfg.expander_trials = 5;
  std::vector<Network> deployed;
  auto update = [&](const DemandMatrix& d, int n, int k, std::uint64_t seed,
                    std::size_t when) {
    Network net = egotrees_update(d, n, k, seed, when);
    deployed.push_back(net);
    return net;
  };
  auto rec = run_meta(t, cfg, update);
  bool ok = rec.reconfigs.size() == 2 && rec.reconfigs[0].t == 4 &&
            rec.reconfigs[1].t == 8 && deployed.size() == 2;
  if (ok) {
    // requests 5..8 must be served on deployed[0] verbatim
    for (std::size_t i = 4; i < 8; ++i) {
      if (rec.costs[i] !=
          deployed[0].dist(t.requests[i].src, t.requests[i].dst)) {
        ok = false;
      }
    }
    for (std::size_t i = 8; i < 10; ++i) {
      if (rec.costs[i] !=
          deployed[1].dist(t.requests[i].src, t.requests[i].dst)) {
        ok = false;
      }
    }
  }
  report(8, "meta-loop reconfiguration contract", ok);
}

// Stars trace keeps its most active node busy in every update window.
void criterion_window_activity(const Trace& stars) {
  auto a = window_activity(stars, 10000);
  char buf[48];
  std::snprintf(buf, sizeof(buf), "(median %d)", a.median);
  report(9, "window activity feasibility", a.median >= 100, buf);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// The same seed and config produce byte-identical report files.
void criterion_reproducibility() {
  Trace t = generate_stars(4, 15, 20000, true, 9);
  OnlineConfig cfg;
  cfg.n = 64;
  cfg.k = 3;
  cfg.R = 1000;
  cfg.W = 2000;
  cfg.seed = 77;
  cfg.expander_trials = 5;
  cfg.algo = "egotrees";
  cfg.trace_name = "stars-small";
  auto emit = [&](const std::string& stem) {
    auto rec = run_meta(t, cfg, egotrees_update);
    write_summary_csv({summarize(rec, cfg.W)}, stem + ".csv");
    write_summary_json({summarize(rec, cfg.W)}, stem + ".json");
    write_histogram_csv(rec, cfg.W, stem + ".hist.csv");
    write_activity_csv(window_activity(t, cfg.R), stem + ".act.csv");
  };
  emit("acc_rep_a");
  emit("acc_rep_b");
  bool ok = true;
  for (const char* ext : {".csv", ".json", ".hist.csv", ".act.csv"}) {
    std::string a = slurp(std::string("acc_rep_a") + ext);
    std::string b = slurp(std::string("acc_rep_b") + ext);
    if (a.empty() || a != b) ok = false;
    std::remove((std::string("acc_rep_a") + ext).c_str());
    std::remove((std::string("acc_rep_b") + ext).c_str());
  }
  report(10, "byte-identical reports on rerun", ok);
}

// Wall time of the offline constructor grows at most ~5x per doubling of n.
void criterion_runtime_scaling() {
  const int k = 4;
  std::vector<double> times;
  for (int n : {256, 512, 1024}) {
    Trace t = generate_stars(n / 32, 31, 100000, true, 13);
    DemandMatrix d = build_demand(t, 0, t.size());
    double best = 1e18;
    for (int rep = 0; rep < 3; ++rep) {
      auto start = Clock::now();
      auto b = greedy_ego_trees(d, n, k, 99);
      (void)b;
      best = std::min(best, seconds_since(start));
    }
    times.push_back(best);
  }
  bool ok = true;
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (times[i] > 5.0 * times[i - 1] && times[i] > 0.05) ok = false;
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "(%.3fs / %.3fs / %.3fs)", times[0],
                times[1], times[2]);
  report(11, "constructor runtime scaling", ok, buf);
}

}  // namespace

int main() {
  criterion_decomposition();
  criterion_star_optimality();
  criterion_entropy_bound();
  criterion_distance_oracle();

  Trace stars = generate_stars(32, 31, 1000000, true, 7);
  StarsRuns runs = criterion_stars_ordering(stars);
  criterion_demand_independence(stars, runs.expander);
  criterion_single_hop();
  criterion_meta_loop();
  criterion_window_activity(stars);
  criterion_reproducibility();
  criterion_runtime_scaling();

  if (g_failed > 0) {
    std::printf("%d criterion(s) FAILED\n", g_failed);
    return 1;
  }
  std::printf("all 11 criteria passed\n");
  return 0;
}
