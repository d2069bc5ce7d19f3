// Baselines: the full vector-clock detector and a Pacer-style proportional
// sampler.

#ifndef RACETEST_DETECTORS_H_
#define RACETEST_DETECTORS_H_

#include <chrono>
#include <cstdint>
#include <vector>

#include "racetest/rpt.h"
#include "racetest/trace.h"
#include "racetest/vector_clock.h"

namespace racetest {

struct RunResult {
  std::vector<RaceReport> reports;
  // Events given full analysis (for Pacer: events inside sampling periods).
  uint64_t sampled_events = 0;
  // Detector steps, including the ones Pacer spends outside sampling periods.
  uint64_t metadata_work = 0;
  std::chrono::nanoseconds elapsed{0};
};

// Every event through the detector.
RunResult RunFull(const Trace& trace);

struct PacerConfig {
  double rate = 0.03;
  size_t period = 1000;
  uint64_t seed = 0;
  // Throws std::invalid_argument unless 0 < rate <= 1 and period >= 1.
  void Validate() const;
};

// Consecutive periods of `period` events, each independently a sampling
// period with probability `rate`. Sampling periods get full analysis. Outside
// them, acquires and releases are still processed, and so are reads and
// writes of variables that already carry metadata; other accesses are
// skipped.
RunResult RunPacer(const Trace& trace, const PacerConfig& config);

// The verdict's counters and reports as a RunResult.
RunResult ToRunResult(const RptVerdict& verdict,
                      std::chrono::nanoseconds elapsed = {});

}  // namespace racetest

#endif  // RACETEST_DETECTORS_H_
