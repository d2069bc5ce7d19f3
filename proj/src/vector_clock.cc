#include "racetest/vector_clock.h"

#include <algorithm>
#include <stdexcept>

namespace racetest {

VectorTime VectorTime::Unit(size_t num_threads, ThreadId t) {
  VectorTime v(num_threads);
  v.clocks_.at(t) = 1;
  return v;
}

bool VectorTime::Leq(const VectorTime& other) const {
  if (clocks_.size() != other.clocks_.size()) {
    throw std::invalid_argument("vector time length mismatch");
  }
  for (size_t i = 0; i < clocks_.size(); ++i) {
    if (clocks_[i] > other.clocks_[i]) return false;
  }
  return true;
}

void VectorTime::JoinWith(const VectorTime& other) {
  if (clocks_.size() != other.clocks_.size()) {
    throw std::invalid_argument("vector time length mismatch");
  }
  for (size_t i = 0; i < clocks_.size(); ++i) {
    clocks_[i] = std::max(clocks_[i], other.clocks_[i]);
  }
}

void VectorTime::Clear() { std::fill(clocks_.begin(), clocks_.end(), 0); }

bool VectorTime::IsBottom() const {
  return std::all_of(clocks_.begin(), clocks_.end(),
                     [](Timestamp c) { return c == 0; });
}

bool VcLeq(const VectorTime& a, const VectorTime& b) { return a.Leq(b); }

VectorTime VcJoin(const VectorTime& a, const VectorTime& b) {
  VectorTime out = a;
  out.JoinWith(b);
  return out;
}

std::string_view RaceKindName(RaceKind kind) {
  switch (kind) {
    case RaceKind::kWriteRead:
      return "write_read";
    case RaceKind::kReadWrite:
      return "read_write";
    case RaceKind::kWriteWrite:
      return "write_write";
  }
  return "?";
}

DetectorState::DetectorState(size_t num_threads) : num_threads_(num_threads) {
  if (num_threads == 0) {
    throw std::invalid_argument("detector needs at least one thread");
  }
  threads_.reserve(num_threads);
  for (ThreadId t = 0; t < num_threads; ++t) {
    threads_.push_back(VectorTime::Unit(num_threads, t));
  }
}

void DetectorState::Reset() {
  for (ThreadId t = 0; t < num_threads_; ++t) {
    threads_[t].Clear();
    threads_[t][t] = 1;
  }
  ++generation_;
  live_vars_ = 0;
  live_locks_ = 0;
  work_ = 0;
}

int64_t DetectorState::LiveSlot(const std::vector<uint64_t>& gens,
                                const std::vector<uint32_t>& slots,
                                uint32_t id) const {
  if (id >= gens.size() || gens[id] != generation_) return -1;
  return slots[id];
}

DetectorState::VarMeta& DetectorState::TouchVar(VarId x) {
  if (int64_t slot = LiveSlot(var_gen_, var_slot_, x); slot >= 0) {
    return var_pool_[slot];
  }
  if (x >= var_gen_.size()) {
    var_gen_.resize(x + 1, 0);
    var_slot_.resize(x + 1, 0);
  }
  if (live_vars_ == var_pool_.size()) {
    VarMeta fresh;
    fresh.read = VectorTime(num_threads_);
    fresh.read_index.assign(num_threads_, 0);
    fresh.read_loc.assign(num_threads_, kNoLoc);
    fresh.write = VectorTime(num_threads_);
    var_pool_.push_back(std::move(fresh));
  } else {
    VarMeta& reused = var_pool_[live_vars_];
    reused.read.Clear();
    std::fill(reused.read_loc.begin(), reused.read_loc.end(), kNoLoc);
    reused.write.Clear();
    reused.write_loc = kNoLoc;
  }
  var_gen_[x] = generation_;
  var_slot_[x] = static_cast<uint32_t>(live_vars_);
  return var_pool_[live_vars_++];
}

VectorTime& DetectorState::TouchLock(LockId l) {
  if (int64_t slot = LiveSlot(lock_gen_, lock_slot_, l); slot >= 0) {
    return lock_pool_[slot];
  }
  if (l >= lock_gen_.size()) {
    lock_gen_.resize(l + 1, 0);
    lock_slot_.resize(l + 1, 0);
  }
  if (live_locks_ == lock_pool_.size()) {
    lock_pool_.emplace_back(num_threads_);
  } else {
    lock_pool_[live_locks_].Clear();
  }
  lock_gen_[l] = generation_;
  lock_slot_[l] = static_cast<uint32_t>(live_locks_);
  return lock_pool_[live_locks_++];
}

size_t DetectorState::Step(EventIndex index, const Event& e,
                           std::vector<RaceReport>& out) {
  if (e.thread >= num_threads_) {
    throw std::out_of_range("event thread id outside detector state");
  }
  ++work_;
  const ThreadId t = e.thread;
  VectorTime& clock = threads_[t];
  size_t reported = 0;

  switch (e.op) {
    case Op::kAcquire: {
      if (int64_t slot = LiveSlot(lock_gen_, lock_slot_, e.lock()); slot >= 0) {
        clock.JoinWith(lock_pool_[slot]);
      }
      break;
    }
    case Op::kRelease: {
      TouchLock(e.lock()) = clock;
      ++clock[t];
      break;
    }
    case Op::kRead: {
      VarMeta& meta = TouchVar(e.var());
      if (!meta.write.Leq(clock)) {
        out.push_back({index, e.var(), RaceKind::kWriteRead, e.loc,
                       meta.write_index, meta.write_loc});
        ++reported;
      }
      meta.read[t] = clock[t];
      meta.read_index[t] = index;
      meta.read_loc[t] = e.loc;
      break;
    }
    case Op::kWrite: {
      VarMeta& meta = TouchVar(e.var());
      if (!meta.read.Leq(clock)) {
        // Report against the latest read not ordered before this write.
        std::optional<ThreadId> latest;
        for (ThreadId u = 0; u < num_threads_; ++u) {
          if (meta.read[u] > clock[u] &&
              (!latest || meta.read_index[u] > meta.read_index[*latest])) {
            latest = u;
          }
        }
        out.push_back({index, e.var(), RaceKind::kReadWrite, e.loc,
                       meta.read_index[*latest], meta.read_loc[*latest]});
        ++reported;
      }
      if (!meta.write.Leq(clock)) {
        out.push_back({index, e.var(), RaceKind::kWriteWrite, e.loc,
                       meta.write_index, meta.write_loc});
        ++reported;
      }
      meta.write = clock;
      meta.write_index = index;
      meta.write_loc = e.loc;
      break;
    }
  }
  return reported;
}

VectorTime DetectorState::LockClock(LockId l) const {
  int64_t slot = LiveSlot(lock_gen_, lock_slot_, l);
  return slot >= 0 ? lock_pool_[slot] : VectorTime(num_threads_);
}

VectorTime DetectorState::ReadClock(VarId x) const {
  int64_t slot = LiveSlot(var_gen_, var_slot_, x);
  return slot >= 0 ? var_pool_[slot].read : VectorTime(num_threads_);
}

VectorTime DetectorState::WriteClock(VarId x) const {
  int64_t slot = LiveSlot(var_gen_, var_slot_, x);
  return slot >= 0 ? var_pool_[slot].write : VectorTime(num_threads_);
}

bool DetectorState::HasMetadata(VarId x) const {
  return LiveSlot(var_gen_, var_slot_, x) >= 0;
}

}  // namespace racetest
