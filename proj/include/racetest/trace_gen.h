// Synthetic well-formed traces with controlled race profiles.

#ifndef RACETEST_TRACE_GEN_H_
#define RACETEST_TRACE_GEN_H_

#include <cstdint>
#include <optional>
#include <string_view>

#include "racetest/trace.h"

namespace racetest {

enum class GenMode {
  // Shared variables are only touched while holding lock L0; everything else
  // goes to thread-private variables.
  kRaceFreeLocked,
  // Every event on thread T0.
  kRaceFreeSingleThread,
  // Locking plus reads only.
  kReadOnly,
  // Locked filler plus an unsynchronized write/write pair on a dedicated
  // variable every window/2 events, so every window of length `window`
  // contains a race.
  kDenseRacy,
  // Locked filler plus exactly `race_count` adjacent racy write pairs, each
  // on its own variable.
  kSparseRacy,
  // Locked filler plus write pairs exactly `min_gap` apart on dedicated
  // variables; the first writer stays silent in between.
  kLongRacesOnly,
  // Well-formed locking with unrestricted shared accesses; races occur at
  // random. Used for cross-checking detectors.
  kMixed,
};

std::string_view GenModeName(GenMode mode);
std::optional<GenMode> GenModeFromName(std::string_view name);

struct GenSpec {
  size_t num_threads = 4;
  size_t num_locks = 4;
  size_t num_vars = 8;
  size_t length = 1000;
  // Per-thread bound on simultaneously held locks.
  size_t max_nesting = 2;
  GenMode mode = GenMode::kRaceFreeLocked;
  size_t window = 0;      // kDenseRacy
  size_t race_count = 0;  // kSparseRacy
  size_t min_gap = 0;     // kLongRacesOnly
  uint64_t seed = 0;
};

// Deterministic given the GenSpec. Throws std::invalid_argument for infeasible
// specs (e.g. racy modes with one thread, window < 4, 2 * race_count >
// length, min_gap >= length).
Trace GenerateTrace(const GenSpec& spec);

struct MeasuredParams {
  size_t num_threads = 0;
  size_t max_locks_held = 0;
  friend bool operator==(const MeasuredParams&,
                         const MeasuredParams&) = default;
};

// Distinct threads and the maximum number of locks held at any position.
MeasuredParams MeasureParams(const SubtraceView& view);
inline MeasuredParams MeasureParams(const Trace& trace) {
  return MeasureParams(SubtraceView(trace));
}

}  // namespace racetest

#endif  // RACETEST_TRACE_GEN_H_
