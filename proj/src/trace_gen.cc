#include "racetest/trace_gen.h"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <unordered_set>

#include "racetest/rng.h"

namespace racetest {

std::string_view GenModeName(GenMode mode) {
  switch (mode) {
    case GenMode::kRaceFreeLocked:
      return "race_free_locked";
    case GenMode::kRaceFreeSingleThread:
      return "race_free_single_thread";
    case GenMode::kReadOnly:
      return "read_only";
    case GenMode::kDenseRacy:
      return "dense_racy";
    case GenMode::kSparseRacy:
      return "sparse_racy";
    case GenMode::kLongRacesOnly:
      return "long_races_only";
    case GenMode::kMixed:
      return "mixed";
  }
  return "?";
}

std::optional<GenMode> GenModeFromName(std::string_view name) {
  for (GenMode mode :
       {GenMode::kRaceFreeLocked, GenMode::kRaceFreeSingleThread,
        GenMode::kReadOnly, GenMode::kDenseRacy, GenMode::kSparseRacy,
        GenMode::kLongRacesOnly, GenMode::kMixed}) {
    if (GenModeName(mode) == name) return mode;
  }
  return std::nullopt;
}

namespace {

constexpr int64_t kFree = -1;

void Validate(const GenSpec& spec) {
  auto fail = [](const std::string& why) {
    throw std::invalid_argument("infeasible generator spec: " + why);
  };
  if (spec.num_threads == 0) fail("num_threads must be positive");
  if (spec.num_vars == 0) fail("num_vars must be positive");
  bool needs_two_threads =
      spec.mode == GenMode::kDenseRacy || spec.mode == GenMode::kLongRacesOnly ||
      (spec.mode == GenMode::kSparseRacy && spec.race_count > 0);
  if (needs_two_threads && spec.num_threads < 2) {
    fail(std::string(GenModeName(spec.mode)) + " needs at least 2 threads");
  }
  if (spec.mode == GenMode::kDenseRacy && spec.window < 4) {
    fail("dense_racy needs window >= 4");
  }
  if (spec.mode == GenMode::kSparseRacy && 2 * spec.race_count > spec.length) {
    fail("sparse_racy race_count exceeds length / 2");
  }
  if (spec.mode == GenMode::kLongRacesOnly &&
      (spec.min_gap == 0 || spec.min_gap >= spec.length)) {
    fail("long_races_only needs 0 < min_gap < length");
  }
}

class Generator {
 public:
  explicit Generator(const GenSpec& spec) : spec_(spec), rng_(spec.seed) {
    const size_t threads =
        spec.mode == GenMode::kRaceFreeSingleThread ? 1 : spec.num_threads;
    for (size_t t = 0; t < threads; ++t) {
      trace_.InternThread("T" + std::to_string(t));
    }
    for (size_t l = 0; l < spec.num_locks; ++l) {
      trace_.InternLock("L" + std::to_string(l));
    }
    for (size_t x = 0; x < spec.num_vars; ++x) {
      shared_.push_back(trace_.InternVar("x" + std::to_string(x)));
    }
    for (size_t t = 0; t < threads; ++t) {
      private_.push_back(trace_.InternVar("p" + std::to_string(t)));
    }
    held_.resize(threads);
    muted_.assign(threads, false);
    owner_.assign(spec.num_locks, kFree);
    trace_.Reserve(spec.length);
  }

  Trace Run() {
    switch (spec_.mode) {
      case GenMode::kDenseRacy:
        RunDense();
        break;
      case GenMode::kSparseRacy:
        RunSparse();
        break;
      case GenMode::kLongRacesOnly:
        RunLong();
        break;
      default:
        while (trace_.size() < spec_.length) Filler();
    }
    return std::move(trace_);
  }

 private:
  size_t num_threads() const { return held_.size(); }

  LocId SiteFor(VarId x, Op op) {
    const size_t key = 2 * static_cast<size_t>(x) + (op == Op::kWrite ? 1 : 0);
    if (key >= sites_.size()) sites_.resize(key + 1, kNoLoc);
    if (sites_[key] == kNoLoc) {
      sites_[key] = trace_.InternLoc(trace_.vars().Name(x) + ".c:" +
                                     std::to_string(op == Op::kWrite ? 20 : 10));
    }
    return sites_[key];
  }

  void Access(ThreadId t, Op op, VarId x) {
    trace_.Append(Event{t, op, x, SiteFor(x, op)});
  }

  void Acquire(ThreadId t, LockId l) {
    owner_[l] = t;
    held_[t].push_back(l);
    trace_.Append(Event::Acquire(t, l));
  }

  void ReleaseTop(ThreadId t) {
    LockId l = held_[t].back();
    held_[t].pop_back();
    owner_[l] = kFree;
    trace_.Append(Event::Release(t, l));
  }

  ThreadId PickThread() {
    for (;;) {
      ThreadId t = static_cast<ThreadId>(rng_.Below(num_threads()));
      if (!muted_[t]) return t;
    }
  }

  ThreadId PickOtherThread(ThreadId not_this) {
    ThreadId t = static_cast<ThreadId>(rng_.Below(num_threads() - 1));
    return t >= not_this ? t + 1 : t;
  }

  Op RandomAccessOp() { return rng_.Bernoulli(0.5) ? Op::kWrite : Op::kRead; }

  VarId RandomShared() { return shared_[rng_.Below(shared_.size())]; }

  // Emits exactly one event.
  void Filler() {
    const ThreadId t = PickThread();
    auto& stack = held_[t];
    const double r = rng_.Unit();
    if (!stack.empty() && r < 0.2) {
      ReleaseTop(t);
      return;
    }
    if (spec_.num_locks > 0 && stack.size() < spec_.max_nesting && r < 0.45) {
      for (int attempt = 0; attempt < 4; ++attempt) {
        LockId l = static_cast<LockId>(rng_.Below(spec_.num_locks));
        if (owner_[l] == kFree) {
          Acquire(t, l);
          return;
        }
      }
    }
    switch (spec_.mode) {
      case GenMode::kRaceFreeSingleThread:
      case GenMode::kMixed:
        Access(t, RandomAccessOp(), RandomShared());
        return;
      case GenMode::kReadOnly:
        Access(t, Op::kRead, RandomShared());
        return;
      default:
        if (spec_.num_locks > 0 && owner_[0] == static_cast<int64_t>(t)) {
          Access(t, RandomAccessOp(), RandomShared());
        } else {
          Access(t, RandomAccessOp(), private_[t]);
        }
    }
  }

  void RacyPair(VarId x) {
    ThreadId a = PickThread();
    ThreadId b = PickOtherThread(a);
    Access(a, Op::kWrite, x);
    Access(b, Op::kWrite, x);
  }

  void RunDense() {
    const size_t stride = spec_.window / 2;
    const VarId x = trace_.InternVar("dense_race");
    while (trace_.size() < spec_.length) {
      const size_t pos = trace_.size();
      if (pos % stride == 0 && pos + 2 <= spec_.length) {
        RacyPair(x);
      } else {
        Filler();
      }
    }
  }

  void RunSparse() {
    // Floyd's sampling of race_count distinct even slots.
    const size_t slots = spec_.length / 2;
    std::unordered_set<size_t> chosen;
    for (size_t j = slots - spec_.race_count; j < slots; ++j) {
      size_t pick = rng_.InRange(0, j);
      chosen.insert(chosen.count(pick) ? j : pick);
    }
    std::vector<size_t> starts;
    for (size_t s : chosen) starts.push_back(2 * s);
    std::sort(starts.begin(), starts.end());

    size_t next = 0;
    while (trace_.size() < spec_.length) {
      if (next < starts.size() && trace_.size() == starts[next]) {
        RacyPair(trace_.InternVar("race" + std::to_string(next)));
        ++next;
      } else {
        Filler();
      }
    }
  }

  void RunLong() {
    constexpr size_t kNever = std::numeric_limits<size_t>::max();
    const size_t gap = spec_.min_gap;
    size_t next_start = rng_.Below(gap + 1);
    std::optional<ThreadId> first;  // chosen first writer
    bool open = false;              // first write emitted, second pending
    size_t target = 0;
    VarId x = 0;
    size_t count = 0;

    while (trace_.size() < spec_.length) {
      const size_t pos = trace_.size();
      if (open && pos == target) {
        Access(PickOtherThread(*first), Op::kWrite, x);
        muted_[*first] = false;
        first.reset();
        open = false;
        next_start = pos + 1 + rng_.Below(gap / 2 + 1);
        continue;
      }
      if (!open && pos >= next_start) {
        if (!first) first = PickThread();
        if (!held_[*first].empty()) {
          ReleaseTop(*first);
          continue;
        }
        if (pos + gap < spec_.length) {
          x = trace_.InternVar("long_race" + std::to_string(count++));
          Access(*first, Op::kWrite, x);
          muted_[*first] = true;
          target = pos + gap;
          open = true;
          continue;
        }
        first.reset();
        next_start = kNever;
      }
      Filler();
    }
  }

  const GenSpec& spec_;
  Rng rng_;
  Trace trace_;
  std::vector<std::vector<LockId>> held_;
  std::vector<int64_t> owner_;
  std::vector<bool> muted_;
  std::vector<VarId> shared_;
  std::vector<VarId> private_;
  std::vector<LocId> sites_;
};

}  // namespace

Trace GenerateTrace(const GenSpec& spec) {
  Validate(spec);
  return Generator(spec).Run();
}

MeasuredParams MeasureParams(const SubtraceView& view) {
  MeasuredParams out;
  std::vector<bool> thread_seen(view.base().threads().size(), false);
  // Locks whose first operation in the view is a release were held from
  // position 0.
  std::vector<int8_t> first_op(view.base().locks().size(), 0);
  size_t held = 0;
  for (const Event& e : view.events()) {
    if (!thread_seen[e.thread]) {
      thread_seen[e.thread] = true;
      ++out.num_threads;
    }
    if (!e.is_access() && first_op[e.lock()] == 0) {
      first_op[e.lock()] = e.op == Op::kRelease ? -1 : 1;
      if (e.op == Op::kRelease) ++held;
    }
  }
  out.max_locks_held = held;
  for (const Event& e : view.events()) {
    if (e.op == Op::kAcquire) {
      out.max_locks_held = std::max(out.max_locks_held, ++held);
    } else if (e.op == Op::kRelease && held > 0) {
      --held;
    }
  }
  return out;
}

}  // namespace racetest
