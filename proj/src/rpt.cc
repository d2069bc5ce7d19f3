#include "racetest/rpt.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "racetest/rng.h"

namespace racetest {

size_t StableCeil(double x) {
  const double nearest = std::round(x);
  if (std::fabs(x - nearest) <= 1e-9 * std::max(1.0, std::fabs(x))) {
    return static_cast<size_t>(nearest);
  }
  return static_cast<size_t>(std::ceil(x));
}

RptParams DeriveParams(size_t num_threads, size_t max_locks_held,
                       double epsilon, double delta, uint64_t seed) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("epsilon must be in (0, 1]");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("delta must be in (0, 1)");
  }
  if (num_threads == 0) {
    throw std::invalid_argument("num_threads must be at least 1");
  }
  RptParams p;
  p.epsilon = epsilon;
  p.delta = delta;
  p.num_threads = num_threads;
  p.max_locks_held = max_locks_held;
  p.seed = seed;
  p.m = 4 * num_threads + 2 * max_locks_held;
  p.window = StableCeil(4.0 * static_cast<double>(p.m) / epsilon);
  p.samples = StableCeil(15.0 * std::log(1.0 / delta) / (2.0 * epsilon));
  p.short_threshold = StableCeil(12.0 * static_cast<double>(p.m) / epsilon);
  p.samples = std::max<size_t>(p.samples, 1);

  const double miss =
      std::pow(1.0 - 2.0 * epsilon / 15.0, static_cast<double>(p.samples));
  if (!(miss < delta)) {
    throw std::logic_error("derived sample count does not reach delta");
  }
  return p;
}

size_t WindowSet::total_length() const {
  size_t total = 0;
  for (const Interval& iv : merged) total += iv.size();
  return total;
}

std::vector<EventIndex> SampleStarts(size_t n, const RptParams& params) {
  if (n < params.window) {
    throw std::invalid_argument("trace shorter than the sampling window");
  }
  Rng rng(params.seed);
  std::vector<EventIndex> starts(params.samples);
  for (auto& s : starts) s = rng.InRange(0, n - params.window);
  return starts;
}

WindowSet MergeWindows(std::vector<EventIndex> starts, size_t k) {
  std::sort(starts.begin(), starts.end());
  WindowSet set;
  for (EventIndex s : starts) {
    if (!set.merged.empty() && s <= set.merged.back().end) {
      set.merged.back().end = std::max(set.merged.back().end, s + k);
    } else {
      set.merged.push_back({s, s + k});
    }
  }
  return set;
}

WindowSet SampleWindows(size_t n, const RptParams& params) {
  return MergeWindows(SampleStarts(n, params), params.window);
}

std::string_view RptModeName(RptMode mode) {
  return mode == RptMode::kSampled ? "sampled" : "short_trace_fallback";
}

RptVerdict RunRpt(const Trace& trace, const RptParams& params) {
  RptVerdict verdict;
  const size_t n = trace.size();
  if (n == 0) {
    verdict.mode = RptMode::kShortTraceFallback;
    return verdict;
  }
  DetectorState state(trace.num_threads());

  if (n < params.short_threshold) {
    verdict.mode = RptMode::kShortTraceFallback;
    for (EventIndex i = 0; i < n; ++i) state.Step(i, trace[i], verdict.reports);
    verdict.metadata_work = state.work();
    verdict.sampled_events = n;
    verdict.racy = !verdict.reports.empty();
    return verdict;
  }

  verdict.mode = RptMode::kSampled;
  verdict.windows = SampleWindows(n, params);
  const auto& intervals = verdict.windows.merged;
  size_t next = 0;  // first interval not yet finished
  for (EventIndex i = 0; i < n; ++i) {
    if (next == intervals.size()) break;
    const Interval& iv = intervals[next];
    if (i < iv.begin) continue;
    if (i == iv.begin) {
      verdict.metadata_work += state.work();
      state.Reset();
    }
    state.Step(i, trace[i], verdict.reports);
    if (i + 1 == iv.end) ++next;
  }
  verdict.metadata_work += state.work();
  verdict.sampled_events = verdict.metadata_work;
  verdict.racy = !verdict.reports.empty();
  return verdict;
}

}  // namespace racetest
