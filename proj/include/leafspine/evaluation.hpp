#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "leafspine/demand.hpp"
#include "leafspine/online.hpp"

namespace leafspine {

// Mean served path length over requests at indices >= warmup.
double apl(const RunRecord& r, std::size_t warmup);

struct CdfPoint {
  int hops;
  double cumulative;
};

// Empirical CDF of served path lengths, warmup excluded; monotone and
// terminating at exactly 1.
std::vector<CdfPoint> path_length_distribution(const RunRecord& r,
                                               std::size_t warmup);

struct WindowActivity {
  std::vector<int> series;  // per disjoint window: max over nodes of
                            // (appearances as source + as destination)
  int min = 0;
  int q1 = 0;
  int median = 0;
  int q3 = 0;
  int max = 0;
};

WindowActivity window_activity(const Trace& t, std::size_t R);

struct SummaryRow {
  std::string algo;
  std::string trace;
  int n = 0;
  int k = 0;
  std::size_t R = 0;
  std::size_t W = 0;
  std::uint64_t seed = 0;
  std::size_t requests = 0;
  std::size_t warmup = 0;
  double apl_all = 0.0;           // whole trace
  double apl_after_warmup = 0.0;  // first `warmup` requests excluded
  std::size_t reconfigs = 0;
  std::string notes;
};

SummaryRow summarize(const RunRecord& r, std::size_t warmup);

// CSV header: algo,trace,n,k,R,W,seed,requests,warmup,apl,apl_no_warmup,reconfigs
void write_summary_csv(const std::vector<SummaryRow>& rows,
                       const std::string& path);
void write_summary_json(const std::vector<SummaryRow>& rows,
                        const std::string& path);
// Rows of "hops,count" for costs at indices >= warmup.
void write_histogram_csv(const RunRecord& r, std::size_t warmup,
                         const std::string& path);
// Rows of "window_index,max_activity".
void write_activity_csv(const WindowActivity& a, const std::string& path);
void write_costs_csv(const RunRecord& r, const std::string& path);

std::string format_double(double x);

}  // namespace leafspine
