// Constant-sample race property tester.
//
// For a trace over |T| threads holding at most h locks at once, with
// m = 4|T| + 2h, the tester samples s = ceil(15 ln(1/delta) / (2 epsilon))
// windows of k = ceil(4m / epsilon) events, merges overlapping windows, and
// runs the vector-clock detector on each merged interval from a fresh state.
// Traces shorter than ceil(12m / epsilon) are analyzed in full instead.
//
// A reported race is always real. A trace whose hamming distance to every
// race-free trace is at least epsilon * n is reported racy with probability
// at least 1 - delta.

#ifndef RACETEST_RPT_H_
#define RACETEST_RPT_H_

#include <cstdint>
#include <string_view>
#include <vector>

#include "racetest/trace.h"
#include "racetest/vector_clock.h"

namespace racetest {

struct RptParams {
  double epsilon = 0.01;
  double delta = 0.1;
  size_t num_threads = 1;
  size_t max_locks_held = 0;
  size_t m = 4;
  size_t window = 0;
  size_t samples = 0;
  size_t short_threshold = 0;
  uint64_t seed = 0;
};

// Throws std::invalid_argument unless 0 < epsilon <= 1, 0 < delta < 1 and
// num_threads >= 1. Also verifies (1 - 2 epsilon / 15)^samples < delta.
RptParams DeriveParams(size_t num_threads, size_t max_locks_held,
                       double epsilon, double delta, uint64_t seed);

// Ceiling that ignores floating-point noise just above an integer, e.g.
// 272 / 0.01 evaluating to 27200.000000000004.
size_t StableCeil(double x);

struct Interval {
  EventIndex begin;
  EventIndex end;
  size_t size() const { return end - begin; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct WindowSet {
  // Sorted, pairwise disjoint and non-adjacent.
  std::vector<Interval> merged;
  size_t total_length() const;
};

// Window starts drawn i.i.d. uniformly from [0, n - window] inclusive.
// Throws std::invalid_argument if n < params.window.
std::vector<EventIndex> SampleStarts(size_t n, const RptParams& params);
// Coalesces [start, start + k) windows that overlap or touch.
WindowSet MergeWindows(std::vector<EventIndex> starts, size_t k);
WindowSet SampleWindows(size_t n, const RptParams& params);

enum class RptMode { kSampled, kShortTraceFallback };
std::string_view RptModeName(RptMode mode);

struct RptVerdict {
  bool racy = false;
  // Absolute event indices.
  std::vector<RaceReport> reports;
  uint64_t sampled_events = 0;
  // Number of detector steps.
  uint64_t metadata_work = 0;
  RptMode mode = RptMode::kSampled;
  WindowSet windows;
};

// The trace is assumed well-formed. Deterministic in (trace, params).
RptVerdict RunRpt(const Trace& trace, const RptParams& params);

}  // namespace racetest

#endif  // RACETEST_RPT_H_
