#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "leafspine/demand.hpp"
#include "leafspine/evaluation.hpp"
#include "leafspine/matching.hpp"
#include "leafspine/online.hpp"
#include "leafspine/rng.hpp"
#include "leafspine/topology.hpp"

namespace fs = std::filesystem;
using namespace leafspine;

namespace {

struct RunSpec {
  std::string trace_path;
  std::string trace_name;
  std::string algo;
  int n = 1024;
  int k = 4;
  std::size_t R = 10000;
  std::size_t W = 20000;
  std::uint64_t seed = 1;
  long long warmup = -1;  // -1: default to W
  int alpha = 6;
  int threshold = -1;  // -1: default to alpha
  int trials = 10;
};

std::string default_out_dir() {
  const char* env = std::getenv("LEAFSPINE_OUT_DIR");
  return env && *env ? env : ".";
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

RunRecord execute(const Trace& trace, const RunSpec& spec) {
  OnlineConfig cfg;
  cfg.n = spec.n;
  cfg.k = spec.k;
  cfg.R = spec.R;
  cfg.W = spec.W;
  cfg.seed = spec.seed;
  cfg.expander_trials = spec.trials;
  cfg.algo = spec.algo;
  cfg.trace_name = spec.trace_name;

  if (spec.algo == "egotrees") {
    return run_meta(trace, cfg, egotrees_update);
  }
  if (spec.algo == "kmatching") {
    return run_meta(trace, cfg, kmatching_update);
  }
  if (spec.algo == "bma") {
    BmaConfig bma;
    bma.alpha = spec.alpha;
    bma.threshold = spec.threshold > 0 ? spec.threshold : spec.alpha;
    return run_bma(trace, cfg, bma);
  }
  if (spec.algo == "expander") {
    Network net = random_expander(spec.n, spec.k, spec.trials, spec.seed).network;
    return run_static(trace, net, cfg);
  }
  if (spec.algo == "static-egotrees") {
    DemandMatrix whole = build_demand(trace, 0, trace.size());
    Network net = greedy_ego_trees(whole, spec.n, spec.k, spec.seed).network;
    return run_static(trace, net, cfg);
  }
  throw std::invalid_argument("unknown algorithm id: " + spec.algo);
}

std::size_t effective_warmup(const RunSpec& spec, std::size_t requests) {
  std::size_t w = spec.warmup >= 0 ? static_cast<std::size_t>(spec.warmup)
                                   : spec.W;
  if (w >= requests) {
    throw std::invalid_argument("warmup (" + std::to_string(w) +
                                ") must be below the request count");
  }
  return w;
}

std::string run_name(const RunSpec& spec) {
  std::ostringstream os;
  os << spec.algo << '_' << spec.trace_name << "_n" << spec.n << "_k"
     << spec.k << "_R" << spec.R << "_W" << spec.W << "_s" << spec.seed;
  return os.str();
}

void print_stats(const TraceStats& s) {
  std::cout << "length=" << s.length << " nodes=" << s.nodes
            << " edges=" << s.edges << " avg=" << format_double(s.avg_degree)
            << " min=" << s.min_degree << " max=" << s.max_degree
            << " self_loops_dropped=" << s.self_loops_dropped << '\n';
}

// Flat JSON config mirroring the long flag names; explicit flags override.
void apply_config(const std::string& path, RunSpec& spec,
                  std::string& out_dir) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json j;
  in >> j;
  auto set_if = [&](const char* key, auto& target) {
    if (j.contains(key)) {
      target = j.at(key).get<std::decay_t<decltype(target)>>();
    }
  };
  set_if("trace", spec.trace_path);
  set_if("algo", spec.algo);
  set_if("n", spec.n);
  set_if("k", spec.k);
  set_if("rate", spec.R);
  set_if("window", spec.W);
  set_if("seed", spec.seed);
  set_if("warmup", spec.warmup);
  set_if("alpha", spec.alpha);
  set_if("threshold", spec.threshold);
  set_if("trials", spec.trials);
  set_if("out-dir", out_dir);
}

int cmd_run(RunSpec spec, std::string out_dir, std::string name, bool hist,
            bool activity, bool costs) {
  if (spec.trace_path.empty()) throw std::runtime_error("--trace is required");
  if (spec.trace_name.empty()) {
    spec.trace_name = fs::path(spec.trace_path).stem().string();
  }
  Trace trace = load_trace(spec.trace_path, spec.n);
  RunRecord rec = execute(trace, spec);
  std::size_t warmup = effective_warmup(spec, rec.costs.size());
  SummaryRow row = summarize(rec, warmup);

  fs::create_directories(out_dir);
  if (name.empty()) name = run_name(spec);
  std::string base = (fs::path(out_dir) / name).string();
  write_summary_csv({row}, base + ".summary.csv");
  write_summary_json({row}, base + ".summary.json");
  if (hist) write_histogram_csv(rec, warmup, base + ".hist.csv");
  if (activity) {
    write_activity_csv(window_activity(trace, spec.R), base + ".activity.csv");
  }
  if (costs) write_costs_csv(rec, base + ".costs.csv");

  std::cout << row.algo << " on " << row.trace
            << ": apl=" << format_double(row.apl_all)
            << " apl_no_warmup=" << format_double(row.apl_after_warmup)
            << " reconfigs=" << row.reconfigs << '\n'
            << "wrote " << base << ".summary.csv\n";
  return 0;
}

int cmd_sweep(const std::vector<std::string>& trace_paths,
              std::vector<std::string> algos, std::vector<std::size_t> rates,
              std::vector<std::size_t> windows, RunSpec base,
              std::string out_dir, unsigned jobs) {
  if (algos.empty() || rates.empty() || windows.empty() ||
      trace_paths.empty()) {
    throw std::runtime_error("sweep grid must be non-empty");
  }
  struct Loaded {
    std::string name;
    Trace trace;
  };
  std::vector<Loaded> traces;
  for (const auto& path : trace_paths) {
    traces.push_back({fs::path(path).stem().string(), load_trace(path, base.n)});
  }

  std::vector<RunSpec> specs;
  for (const auto& tr : traces) {
    for (const auto& algo : algos) {
      for (std::size_t R : rates) {
        for (std::size_t W : windows) {
          RunSpec s = base;
          s.trace_name = tr.name;
          s.algo = algo;
          s.R = R;
          s.W = W;
          std::ostringstream id;
          id << tr.name << '|' << algo << '|' << R << '|' << W;
          s.seed = mix64(base.seed ^ fnv1a(id.str()));
          specs.push_back(s);
        }
      }
    }
  }

  std::vector<std::optional<SummaryRow>> results(specs.size());
  std::vector<std::string> errors(specs.size());
  std::atomic<std::size_t> next{0};
  auto trace_of = [&](const std::string& name) -> const Trace& {
    for (const auto& tr : traces) {
      if (tr.name == name) return tr.trace;
    }
    throw std::logic_error("trace lookup failed");
  };
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= specs.size()) break;
      try {
        RunRecord rec = execute(trace_of(specs[i].trace_name), specs[i]);
        results[i] = summarize(rec, effective_warmup(specs[i], rec.costs.size()));
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, specs.size());
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < jobs; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  std::vector<SummaryRow> rows;
  bool failed = false;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (results[i]) {
      rows.push_back(*results[i]);
    } else {
      failed = true;
      std::cerr << "sweep run failed (" << specs[i].trace_name << ", "
                << specs[i].algo << ", R=" << specs[i].R
                << ", W=" << specs[i].W << "): " << errors[i] << '\n';
    }
  }

  fs::create_directories(out_dir);
  write_summary_csv(rows, (fs::path(out_dir) / "sweep.csv").string());
  write_summary_json(rows, (fs::path(out_dir) / "sweep.json").string());

  // Best (R,W) per trace/algorithm by post-warmup APL.
  std::ofstream best((fs::path(out_dir) / "best.csv").string(),
                     std::ios::binary);
  best << "algo,trace,best_R,best_W,apl_no_warmup\n";
  for (const auto& tr : traces) {
    for (const auto& algo : algos) {
      const SummaryRow* winner = nullptr;
      for (const auto& row : rows) {
        if (row.trace != tr.name || row.algo != algo) continue;
        if (!winner || row.apl_after_warmup < winner->apl_after_warmup) {
          winner = &row;
        }
      }
      if (winner) {
        best << algo << ',' << tr.name << ',' << winner->R << ','
             << winner->W << ',' << format_double(winner->apl_after_warmup)
             << '\n';
      }
    }
  }

  std::cout << "sweep complete: " << rows.size() << '/' << specs.size()
            << " runs, reports in " << out_dir << '\n';
  return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-adjusting leaf-spine topology simulator"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Write a synthetic trace/demand");
  gen->require_subcommand(1);
  int g_stars = 32, g_leaves = 31, g_n = 1024, g_arity = 4;
  std::size_t g_length = 1000000;
  std::uint64_t g_seed = 1;
  double g_exponent = 1.2;
  bool g_uniform_leaves = false;
  std::string g_out = "trace.txt";

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", g_seed, "Master seed");
    cmd->add_option("--out", g_out, "Output path");
  };
  auto* gs = gen->add_subcommand("stars", "Disjoint bidirectional stars");
  gs->add_option("--stars", g_stars, "Number of stars");
  gs->add_option("--leaves", g_leaves, "Leaves per star");
  gs->add_option("--length", g_length, "Requests to generate");
  gs->add_option("--n", g_n, "Expected node count (stars*(leaves+1))");
  gs->add_flag("--uniform-leaves", g_uniform_leaves,
               "Uniform leaf choice instead of 1/i");
  add_common(gs);
  auto* gf = gen->add_subcommand("forest", "Directed-forest demand matrix");
  gf->add_option("--n", g_n, "Node count");
  gf->add_option("--arity", g_arity, "Out-degree bound of the forest");
  add_common(gf);
  auto* gu = gen->add_subcommand("uniform", "Uniform random pairs");
  gu->add_option("--n", g_n, "Node count");
  gu->add_option("--length", g_length, "Requests to generate");
  add_common(gu);
  auto* gz = gen->add_subcommand("zipf", "Zipf-skewed pairs");
  gz->add_option("--n", g_n, "Node count");
  gz->add_option("--length", g_length, "Requests to generate");
  gz->add_option("--exponent", g_exponent, "Zipf exponent");
  add_common(gz);

  // stats
  auto* stats = app.add_subcommand("stats", "Print trace statistics");
  std::string st_trace;
  int st_n = 1024;
  stats->add_option("--trace", st_trace, "Trace file")->required();
  stats->add_option("--n", st_n, "Node count bound");

  // run
  auto* run = app.add_subcommand("run", "Single simulation run");
  RunSpec spec;
  std::string out_dir = default_out_dir();
  std::string config_path, name;
  bool opt_hist = false, opt_activity = false, opt_costs = false;
  run->add_option("--config", config_path, "JSON config mirroring the flags");
  run->add_option("--trace", spec.trace_path, "Trace file");
  run->add_option("--algo", spec.algo,
                  "egotrees|kmatching|bma|expander|static-egotrees");
  run->add_option("--n", spec.n, "Node count");
  run->add_option("--k", spec.k, "Degree bound / spine count");
  run->add_option("--rate", spec.R, "Update rate R");
  run->add_option("--window", spec.W, "Window size W");
  run->add_option("--seed", spec.seed, "Master seed");
  run->add_option("--warmup", spec.warmup, "Warmup exclusion (default: W)");
  run->add_option("--alpha", spec.alpha, "BMA cost parameter");
  run->add_option("--threshold", spec.threshold,
                  "BMA insertion threshold (default: alpha)");
  run->add_option("--trials", spec.trials, "Expander candidate count");
  run->add_option("--out-dir", out_dir, "Report directory");
  run->add_option("--name", name, "Report base name");
  run->add_flag("--hist", opt_hist, "Also write a path-length histogram");
  run->add_flag("--activity", opt_activity, "Also write window activity");
  run->add_flag("--costs", opt_costs, "Also write per-request costs");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "W x R parameter grid");
  std::vector<std::string> sw_traces, sw_algos{"egotrees"};
  std::vector<std::size_t> sw_rates{5000, 10000, 20000, 40000, 100000};
  std::vector<std::size_t> sw_windows{5000, 10000, 20000, 40000, 100000};
  unsigned sw_jobs = 0;
  RunSpec sw_base;
  std::string sw_out_dir = default_out_dir();
  sweep->add_option("--trace", sw_traces, "Trace file(s)")->required();
  sweep->add_option("--algos", sw_algos, "Algorithm ids")->delimiter(',');
  sweep->add_option("--rates", sw_rates, "Update rates")->delimiter(',');
  sweep->add_option("--windows", sw_windows, "Window sizes")->delimiter(',');
  sweep->add_option("--n", sw_base.n, "Node count");
  sweep->add_option("--k", sw_base.k, "Degree bound");
  sweep->add_option("--seed", sw_base.seed, "Master seed");
  sweep->add_option("--warmup", sw_base.warmup, "Warmup (default: W)");
  sweep->add_option("--alpha", sw_base.alpha, "BMA cost parameter");
  sweep->add_option("--trials", sw_base.trials, "Expander candidates");
  sweep->add_option("--jobs", sw_jobs, "Worker threads (0 = hardware)");
  sweep->add_option("--out-dir", sw_out_dir, "Report directory");

  // decompose
  auto* dec = app.add_subcommand("decompose",
                                 "Network JSON -> matching set JSON");
  std::string dc_network, dc_out = "matchings.json";
  dec->add_option("--network", dc_network, "Network JSON file")->required();
  dec->add_option("--out", dc_out, "Output matching set JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gs->parsed()) {
      if (gs->count("--n") && g_n != g_stars * (g_leaves + 1)) {
        throw std::runtime_error("stars*(leaves+1) must equal n");
      }
      Trace t = generate_stars(g_stars, g_leaves, g_length,
                               !g_uniform_leaves, g_seed);
      std::ofstream out(g_out, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write " + g_out);
      write_trace(t, out);
      print_stats(trace_stats(t));
      return 0;
    }
    if (gf->parsed()) {
      DemandMatrix d = generate_forest_demand(g_n, g_arity, g_seed);
      std::ofstream out(g_out, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write " + g_out);
      out << "# src dst probability\n";
      for (const auto& e : d.entries()) {
        out << e.src << ' ' << e.dst << ' ' << format_double(e.p) << '\n';
      }
      std::cout << "wrote demand with " << d.support_size() << " pairs to "
                << g_out << '\n';
      return 0;
    }
    if (gu->parsed() || gz->parsed()) {
      Trace t = gu->parsed()
                    ? generate_uniform_pairs(g_n, g_length, g_seed)
                    : generate_zipf_pairs(g_n, g_length, g_exponent, g_seed);
      std::ofstream out(g_out, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write " + g_out);
      write_trace(t, out);
      print_stats(trace_stats(t));
      return 0;
    }
    if (stats->parsed()) {
      print_stats(trace_stats(load_trace(st_trace, st_n)));
      return 0;
    }
    if (run->parsed()) {
      if (!config_path.empty()) {
        RunSpec from_file = spec;
        apply_config(config_path, from_file, out_dir);
        // Flags given on the command line win over the config file.
        auto keep = [&](const char* flag, auto RunSpec::* member) {
          if (run->count(flag)) from_file.*member = spec.*member;
        };
        keep("--trace", &RunSpec::trace_path);
        keep("--algo", &RunSpec::algo);
        keep("--n", &RunSpec::n);
        keep("--k", &RunSpec::k);
        keep("--rate", &RunSpec::R);
        keep("--window", &RunSpec::W);
        keep("--seed", &RunSpec::seed);
        keep("--warmup", &RunSpec::warmup);
        keep("--alpha", &RunSpec::alpha);
        keep("--threshold", &RunSpec::threshold);
        keep("--trials", &RunSpec::trials);
        spec = from_file;
      }
      return cmd_run(spec, out_dir, name, opt_hist, opt_activity, opt_costs);
    }
    if (sweep->parsed()) {
      return cmd_sweep(sw_traces, sw_algos, sw_rates, sw_windows, sw_base,
                       sw_out_dir, sw_jobs);
    }
    if (dec->parsed()) {
      std::ifstream in(dc_network);
      if (!in) throw std::runtime_error("cannot open " + dc_network);
      nlohmann::json j;
      in >> j;
      Network g(j.at("n").get<int>(), j.at("k").get<int>());
      for (const auto& e : j.at("edges")) {
        g.add_edge(e.at(0).get<int>(), e.at(1).get<int>());
      }
      MatchingSet ms = decompose_to_matchings(g);
      std::ofstream out(dc_out, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write " + dc_out);
      out << matching_set_to_json(ms).dump(2) << '\n';
      std::cout << "wrote " << dc_out << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
