// Aggregation of race reports into warning counts, racy memory locations,
// racy source locations and the short-race fraction.

#ifndef RACETEST_REPORT_H_
#define RACETEST_REPORT_H_

#include <chrono>
#include <optional>
#include <span>

#include "racetest/detectors.h"
#include "racetest/oracle.h"
#include "racetest/trace.h"
#include "json.hpp"

namespace racetest {

struct Summary {
  size_t warnings = 0;
  size_t distinct_vars = 0;
  // Unordered (prior location, location) pairs; reports missing either
  // location are not counted.
  size_t distinct_source_pairs = 0;
  // Fraction of reports with a known prior index whose index distance is
  // below the window length. Absent without a window or without such reports.
  std::optional<double> short_race_fraction;
  uint64_t metadata_work = 0;
  uint64_t sampled_events = 0;
  std::chrono::nanoseconds elapsed{0};
};

// Throws std::out_of_range if a report refers to an index outside the trace.
Summary Summarize(const RunResult& result, const Trace& trace,
                  std::optional<size_t> window = std::nullopt);

// Same fraction over oracle pairs (second - first < window).
std::optional<double> ShortRaceFraction(std::span<const RacePair> pairs,
                                        size_t window);

nlohmann::json ToJson(const Summary& summary, bool include_elapsed);
nlohmann::json ToJson(const RaceReport& report, const Trace& trace);
nlohmann::json ToJson(const RacePair& pair, const Trace& trace);

}  // namespace racetest

#endif  // RACETEST_REPORT_H_
