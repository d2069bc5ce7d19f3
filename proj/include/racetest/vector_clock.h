// Vector times and the per-event happens-before detector state machine.

#ifndef RACETEST_VECTOR_CLOCK_H_
#define RACETEST_VECTOR_CLOCK_H_

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string_view>
#include <vector>

#include "racetest/trace.h"

namespace racetest {

using Timestamp = uint32_t;

// Dense map thread -> timestamp. A default or zero-filled time is bottom.
class VectorTime {
 public:
  VectorTime() = default;
  explicit VectorTime(size_t num_threads) : clocks_(num_threads, 0) {}
  VectorTime(std::initializer_list<Timestamp> clocks) : clocks_(clocks) {}

  // Bottom with a 1 at thread t.
  static VectorTime Unit(size_t num_threads, ThreadId t);

  size_t size() const { return clocks_.size(); }
  Timestamp operator[](ThreadId t) const { return clocks_[t]; }
  Timestamp& operator[](ThreadId t) { return clocks_[t]; }

  // Componentwise <=. Throws std::invalid_argument on a length mismatch.
  bool Leq(const VectorTime& other) const;
  // this <- this join other. Throws std::invalid_argument on a length
  // mismatch.
  void JoinWith(const VectorTime& other);
  void Clear();
  bool IsBottom() const;

  friend bool operator==(const VectorTime&, const VectorTime&) = default;

 private:
  std::vector<Timestamp> clocks_;
};

bool VcLeq(const VectorTime& a, const VectorTime& b);
VectorTime VcJoin(const VectorTime& a, const VectorTime& b);

// Which check failed: the read check against the last write, the write check
// against prior reads, or the write check against the last write.
enum class RaceKind : uint8_t { kWriteRead, kReadWrite, kWriteWrite };
std::string_view RaceKindName(RaceKind kind);

struct RaceReport {
  // The checking event.
  EventIndex event_index = 0;
  VarId var = 0;
  RaceKind kind = RaceKind::kWriteRead;
  LocId loc = kNoLoc;
  // The earlier access whose metadata failed the check. For kReadWrite it is
  // the most recent read among the unordered readers.
  std::optional<EventIndex> prior_index;
  LocId prior_loc = kNoLoc;

  friend bool operator==(const RaceReport&, const RaceReport&) = default;
};

// Per-thread clocks C, per-lock clocks L, per-variable read clocks R and write
// clocks W. Lock and variable metadata are created lazily on first touch and
// read as bottom before that; Reset() discards all of it in O(|T|^2).
//
// Reads record only the reader's own component (R_x[t] <- C_t(t)) and a
// thread's own component advances after each of its releases.
class DetectorState {
 public:
  // Throws std::invalid_argument if num_threads == 0.
  explicit DetectorState(size_t num_threads);

  // Back to the initial state: C_t = bottom[1/t], no lock or variable
  // metadata, work counter zero.
  void Reset();

  // Runs the handler for `e`, appending one report per failed check to
  // `out`. Returns the number of reports appended. `index` is the event's
  // position used in reports. Throws std::out_of_range if e.thread is not
  // below num_threads().
  size_t Step(EventIndex index, const Event& e, std::vector<RaceReport>& out);

  size_t num_threads() const { return num_threads_; }
  uint64_t work() const { return work_; }

  const VectorTime& ThreadClock(ThreadId t) const { return threads_.at(t); }
  VectorTime LockClock(LockId l) const;
  VectorTime ReadClock(VarId x) const;
  VectorTime WriteClock(VarId x) const;
  // True once x has been touched by a read or write since the last reset.
  bool HasMetadata(VarId x) const;

 private:
  struct VarMeta {
    VectorTime read;
    std::vector<EventIndex> read_index;
    std::vector<LocId> read_loc;
    VectorTime write;
    EventIndex write_index = 0;
    LocId write_loc = kNoLoc;
  };

  // Index into the pool or -1 when untouched in the current generation.
  int64_t LiveSlot(const std::vector<uint64_t>& gens,
                   const std::vector<uint32_t>& slots, uint32_t id) const;
  VarMeta& TouchVar(VarId x);
  VectorTime& TouchLock(LockId l);

  size_t num_threads_;
  uint64_t work_ = 0;
  uint64_t generation_ = 1;
  std::vector<VectorTime> threads_;

  std::vector<uint64_t> var_gen_;
  std::vector<uint32_t> var_slot_;
  std::vector<VarMeta> var_pool_;
  size_t live_vars_ = 0;

  std::vector<uint64_t> lock_gen_;
  std::vector<uint32_t> lock_slot_;
  std::vector<VectorTime> lock_pool_;
  size_t live_locks_ = 0;
};

}  // namespace racetest

#endif  // RACETEST_VECTOR_CLOCK_H_
