#include "racetest/detectors.h"

#include <stdexcept>

#include "racetest/rng.h"

namespace racetest {

namespace {

using Clock = std::chrono::steady_clock;

}  // namespace

RunResult RunFull(const Trace& trace) {
  RunResult result;
  const auto start = Clock::now();
  if (!trace.empty()) {
    DetectorState state(trace.num_threads());
    for (EventIndex i = 0; i < trace.size(); ++i) {
      state.Step(i, trace[i], result.reports);
    }
    result.metadata_work = state.work();
  }
  result.sampled_events = trace.size();
  result.elapsed = Clock::now() - start;
  return result;
}

void PacerConfig::Validate() const {
  if (!(rate > 0.0 && rate <= 1.0)) {
    throw std::invalid_argument("pacer rate must be in (0, 1]");
  }
  if (period == 0) throw std::invalid_argument("pacer period must be >= 1");
}

RunResult RunPacer(const Trace& trace, const PacerConfig& config) {
  config.Validate();
  RunResult result;
  const auto start = Clock::now();
  if (trace.empty()) return result;

  DetectorState state(trace.num_threads());
  Rng rng(config.seed);
  bool sampling = false;
  for (EventIndex i = 0; i < trace.size(); ++i) {
    if (i % config.period == 0) sampling = rng.Bernoulli(config.rate);
    const Event& e = trace[i];
    if (sampling) {
      ++result.sampled_events;
    } else if (e.is_access() && !state.HasMetadata(e.var())) {
      continue;
    }
    state.Step(i, e, result.reports);
  }
  result.metadata_work = state.work();
  result.elapsed = Clock::now() - start;
  return result;
}

RunResult ToRunResult(const RptVerdict& verdict,
                      std::chrono::nanoseconds elapsed) {
  RunResult result;
  result.reports = verdict.reports;
  result.sampled_events = verdict.sampled_events;
  result.metadata_work = verdict.metadata_work;
  result.elapsed = elapsed;
  return result;
}

}  // namespace racetest
