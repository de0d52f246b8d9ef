#include "leafspine/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

#include "json.hpp"

namespace leafspine {

double apl(const RunRecord& r, std::size_t warmup) {
  if (warmup >= r.costs.size()) {
    throw std::invalid_argument("warmup leaves no requests to average");
  }
  long long total = 0;
  for (std::size_t i = warmup; i < r.costs.size(); ++i) total += r.costs[i];
  return static_cast<double>(total) /
         static_cast<double>(r.costs.size() - warmup);
}

std::vector<CdfPoint> path_length_distribution(const RunRecord& r,
                                               std::size_t warmup) {
  if (warmup >= r.costs.size()) {
    throw std::invalid_argument("warmup leaves no requests to distribute");
  }
  std::map<int, std::size_t> counts;
  for (std::size_t i = warmup; i < r.costs.size(); ++i) ++counts[r.costs[i]];
  const double total = static_cast<double>(r.costs.size() - warmup);
  std::vector<CdfPoint> cdf;
  cdf.reserve(counts.size());
  std::size_t running = 0;
  for (const auto& [hops, count] : counts) {
    running += count;
    cdf.push_back({hops, static_cast<double>(running) / total});
  }
  return cdf;
}

namespace {

// Nearest-rank quantile on a sorted vector.
int quantile(const std::vector<int>& sorted, double q) {
  std::size_t idx = static_cast<std::size_t>(q * (sorted.size() - 1) + 0.5);
  return sorted[std::min(idx, sorted.size() - 1)];
}

}  // namespace

WindowActivity window_activity(const Trace& t, std::size_t R) {
  if (R < 1) throw std::invalid_argument("window size must be >= 1");
  WindowActivity out;
  std::vector<int> activity(t.n, 0);
  std::vector<int> touched;
  std::size_t in_window = 0;
  auto flush = [&]() {
    int best = 0;
    for (int v : touched) {
      best = std::max(best, activity[v]);
      activity[v] = 0;
    }
    touched.clear();
    out.series.push_back(best);
    in_window = 0;
  };
  for (const auto& r : t.requests) {
    if (activity[r.src] == 0) touched.push_back(r.src);
    ++activity[r.src];
    if (activity[r.dst] == 0) touched.push_back(r.dst);
    ++activity[r.dst];
    if (++in_window == R) flush();
  }
  if (in_window > 0) flush();  // trailing partial window

  if (!out.series.empty()) {
    std::vector<int> sorted = out.series;
    std::sort(sorted.begin(), sorted.end());
    out.min = sorted.front();
    out.max = sorted.back();
    out.q1 = quantile(sorted, 0.25);
    out.median = quantile(sorted, 0.5);
    out.q3 = quantile(sorted, 0.75);
  }
  return out;
}

SummaryRow summarize(const RunRecord& r, std::size_t warmup) {
  SummaryRow row;
  row.algo = r.algo;
  row.trace = r.trace_name;
  row.n = r.n;
  row.k = r.k;
  row.R = r.R;
  row.W = r.W;
  row.seed = r.seed;
  row.requests = r.costs.size();
  row.warmup = warmup;
  row.apl_all = apl(r, 0);
  row.apl_after_warmup = apl(r, warmup);
  row.reconfigs = r.reconfigs.size();
  row.notes = r.notes;
  return row;
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  return out;
}

}  // namespace

void write_summary_csv(const std::vector<SummaryRow>& rows,
                       const std::string& path) {
  auto out = open_out(path);
  out << "algo,trace,n,k,R,W,seed,requests,warmup,apl,apl_no_warmup,"
         "reconfigs\n";
  for (const auto& r : rows) {
    out << r.algo << ',' << r.trace << ',' << r.n << ',' << r.k << ',' << r.R
        << ',' << r.W << ',' << r.seed << ',' << r.requests << ',' << r.warmup
        << ',' << format_double(r.apl_all) << ','
        << format_double(r.apl_after_warmup) << ',' << r.reconfigs << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_summary_json(const std::vector<SummaryRow>& rows,
                        const std::string& path) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json row{{"algo", r.algo},
                       {"trace", r.trace},
                       {"n", r.n},
                       {"k", r.k},
                       {"R", r.R},
                       {"W", r.W},
                       {"seed", r.seed},
                       {"requests", r.requests},
                       {"warmup", r.warmup},
                       {"apl", r.apl_all},
                       {"apl_after_warmup", r.apl_after_warmup},
                       {"reconfigs", r.reconfigs}};
    if (!r.notes.empty()) row["notes"] = r.notes;
    arr.push_back(std::move(row));
  }
  auto out = open_out(path);
  out << arr.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_histogram_csv(const RunRecord& r, std::size_t warmup,
                         const std::string& path) {
  std::map<int, std::size_t> counts;
  for (std::size_t i = warmup; i < r.costs.size(); ++i) ++counts[r.costs[i]];
  auto out = open_out(path);
  out << "hops,count\n";
  for (const auto& [hops, count] : counts) {
    out << hops << ',' << count << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_activity_csv(const WindowActivity& a, const std::string& path) {
  auto out = open_out(path);
  out << "window_index,max_activity\n";
  for (std::size_t i = 0; i < a.series.size(); ++i) {
    out << i << ',' << a.series[i] << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_costs_csv(const RunRecord& r, const std::string& path) {
  auto out = open_out(path);
  out << "hops\n";
  for (int c : r.costs) out << c << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace leafspine
