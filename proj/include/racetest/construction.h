// Executable versions of the repair constructions behind the tester's
// correctness argument: the synchronization-only connector that orders one
// sub-trace entirely before another, the greedy split of a trace into
// disjoint racy segments, and the race-free projection those two yield.

#ifndef RACETEST_CONSTRUCTION_H_
#define RACETEST_CONSTRUCTION_H_

#include <optional>
#include <span>
#include <vector>

#include "racetest/trace.h"

namespace racetest {

// Trace entities a connector may introduce. `order_lock` should be a lock
// that does not occur in the connected sub-traces; padding reads `pad_var`
// from `pad_thread`.
struct ConnectorResources {
  LockId order_lock = 0;
  ThreadId pad_thread = 0;
  VarId pad_var = 0;
};

struct Connector {
  std::vector<Event> events;
  size_t unpadded_length = 0;
  std::optional<size_t> padded_to;
};

// Builds mu(first, second):
//   1. release order_lock if `first` ends holding it;
//   2. acq/rel order_lock by every thread, twice over;
//   3. release the other locks held at the end of `first`;
//   4. acquire the locks held at the beginning of `second`.
// first + mu + second is then a well-formed sub-trace in which every event of
// `first` happens before every event of `second`, and mu has no accesses
// except padding reads. If pad_to is given the result has exactly pad_to
// events; throws std::invalid_argument if pad_to is below the unpadded size.
Connector BuildConnector(const SubtraceView& first, const SubtraceView& second,
                         std::span<const ThreadId> threads,
                         const ConnectorResources& resources,
                         std::optional<size_t> pad_to = std::nullopt);

// Half-open [begin, end): the shortest prefix starting at `begin` that
// contains a race ends at `end`.
struct Segment {
  EventIndex begin;
  EventIndex end;
  friend bool operator==(const Segment&, const Segment&) = default;
};

struct Segmentation {
  std::vector<Segment> segments;
  size_t m = 0;
};

// The greedy sequence: the first segment begins at 0, each next one begins
// m - 1 positions after the previous end; stops when the remaining suffix is
// race-free or no room is left. Throws std::invalid_argument if m == 0.
Segmentation GreedyRacySegments(const Trace& trace, size_t m);

struct Projection {
  Trace projected;
  // Hamming distance between the input and `projected`.
  size_t changed = 0;
  // Number of racy segments; changed <= segments * m.
  size_t segments = 0;
  size_t m = 0;
};

// Replaces the last event of every racy segment plus the following gap with a
// connector padded to length m. When m is not given it is 4|T| + 2h from the
// measured trace parameters. Throws std::invalid_argument if m is smaller
// than a connector needs.
Projection RaceFreeProjection(const Trace& trace,
                              std::optional<size_t> m = std::nullopt);

}  // namespace racetest

#endif  // RACETEST_CONSTRUCTION_H_
