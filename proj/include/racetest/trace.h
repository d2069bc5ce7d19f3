// Event and trace model: interned ids, sub-trace views, lock-held
// computation, well-formedness and hamming distance.

#ifndef RACETEST_TRACE_H_
#define RACETEST_TRACE_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace racetest {

using ThreadId = uint32_t;
using LockId = uint32_t;
using VarId = uint32_t;
using LocId = uint32_t;
using EventIndex = size_t;

inline constexpr LocId kNoLoc = std::numeric_limits<LocId>::max();

enum class Op : uint8_t { kRead, kWrite, kAcquire, kRelease };

inline bool IsAccess(Op op) { return op == Op::kRead || op == Op::kWrite; }
inline bool IsSync(Op op) { return op == Op::kAcquire || op == Op::kRelease; }

// Log-format token: "r", "w", "acq", "rel".
std::string_view OpToken(Op op);
std::optional<Op> OpFromToken(std::string_view token);

struct Event {
  ThreadId thread = 0;
  Op op = Op::kRead;
  // VarId for reads/writes, LockId for acquires/releases.
  uint32_t operand = 0;
  LocId loc = kNoLoc;

  static Event Read(ThreadId t, VarId x, LocId loc = kNoLoc) {
    return {t, Op::kRead, x, loc};
  }
  static Event Write(ThreadId t, VarId x, LocId loc = kNoLoc) {
    return {t, Op::kWrite, x, loc};
  }
  static Event Acquire(ThreadId t, LockId l) { return {t, Op::kAcquire, l}; }
  static Event Release(ThreadId t, LockId l) { return {t, Op::kRelease, l}; }

  bool is_access() const { return IsAccess(op); }
  VarId var() const { return operand; }
  LockId lock() const { return operand; }

  // Equality over (thread, op, operand); the source location is not part of
  // the event alphabet.
  bool SameAction(const Event& other) const {
    return thread == other.thread && op == other.op &&
           operand == other.operand;
  }

  friend bool operator==(const Event&, const Event&) = default;
};

// Maps external names to dense ids in first-appearance order.
class InternTable {
 public:
  uint32_t Intern(std::string_view name);
  std::optional<uint32_t> Find(std::string_view name) const;
  const std::string& Name(uint32_t id) const { return names_.at(id); }
  size_t size() const { return names_.size(); }
  bool Contains(uint32_t id) const { return id < names_.size(); }
  // Interns `base`, or `base` followed by a numeric suffix if `base` is
  // already taken. Always returns a freshly created id.
  uint32_t InternFresh(std::string_view base);

 private:
  struct Hash {
    using is_transparent = void;
    size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };
  std::unordered_map<std::string, uint32_t, Hash, std::equal_to<>> ids_;
  std::vector<std::string> names_;
};

class Trace {
 public:
  Trace() = default;

  ThreadId InternThread(std::string_view name) { return threads_.Intern(name); }
  LockId InternLock(std::string_view name) { return locks_.Intern(name); }
  VarId InternVar(std::string_view name) { return vars_.Intern(name); }
  LocId InternLoc(std::string_view name) { return locs_.Intern(name); }
  LockId FreshLock(std::string_view base) { return locks_.InternFresh(base); }
  VarId FreshVar(std::string_view base) { return vars_.InternFresh(base); }

  // Interns the names and appends. An empty `loc` means no location.
  void Append(std::string_view thread, Op op, std::string_view operand,
              std::string_view loc = {});
  // Throws std::out_of_range if an id is not in its table.
  void Append(const Event& e);
  void Reserve(size_t n) { events_.reserve(n); }

  // A trace sharing this trace's intern tables, with the given events.
  Trace WithEvents(std::vector<Event> events) const;

  const std::vector<Event>& events() const { return events_; }
  const Event& operator[](EventIndex i) const { return events_[i]; }
  size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }

  const InternTable& threads() const { return threads_; }
  const InternTable& locks() const { return locks_; }
  const InternTable& vars() const { return vars_; }
  const InternTable& locs() const { return locs_; }
  size_t num_threads() const { return threads_.size(); }

  const std::string& ThreadName(ThreadId t) const { return threads_.Name(t); }
  // Operand name resolved against the lock or variable table.
  const std::string& OperandName(const Event& e) const;
  std::optional<std::string_view> LocName(LocId loc) const;

 private:
  std::vector<Event> events_;
  InternTable threads_;
  InternTable locks_;
  InternTable vars_;
  InternTable locs_;
};

// Non-owning half-open slice [start, end) of a trace.
class SubtraceView {
 public:
  explicit SubtraceView(const Trace& base)
      : base_(&base), start_(0), end_(base.size()) {}
  // An end at or before start yields an empty view. Throws std::out_of_range
  // if either bound exceeds the trace length.
  SubtraceView(const Trace& base, EventIndex start, EventIndex end);

  const Trace& base() const { return *base_; }
  EventIndex start() const { return start_; }
  EventIndex end() const { return end_; }
  size_t size() const { return end_ - start_; }
  bool empty() const { return end_ == start_; }
  // Relative indexing.
  const Event& operator[](size_t i) const { return (*base_)[start_ + i]; }
  std::span<const Event> events() const {
    return std::span<const Event>(base_->events()).subspan(start_, size());
  }
  // Relative sub-slice [i, j).
  SubtraceView Slice(size_t i, size_t j) const;

 private:
  const Trace* base_;
  EventIndex start_;
  EventIndex end_;
};

// Concatenation of views over one base trace, sharing its tables.
Trace Concatenate(std::span<const SubtraceView> parts);

enum class ViolationReason {
  kOverlappingCriticalSection,
  kReentrantAcquire,
  kUnmatchedRelease,
};
std::string_view ViolationReasonName(ViolationReason reason);

struct WellFormednessViolation {
  EventIndex index;
  ViolationReason reason;
  friend bool operator==(const WellFormednessViolation&,
                         const WellFormednessViolation&) = default;
};

// Full-trace check: every release matches a prior acquire of the same lock by
// the same thread with no acquire/release of that lock in between, and no
// thread acquires a held lock. Returns the first violation.
std::optional<WellFormednessViolation> CheckWellFormed(
    std::span<const Event> events);
inline std::optional<WellFormednessViolation> CheckWellFormed(
    const Trace& trace) {
  return CheckWellFormed(std::span<const Event>(trace.events()));
}
// Sub-trace variant: additionally accepts a release of a lock whose first
// operation in the slice is that release (acquired before the slice began).
std::optional<WellFormednessViolation> CheckWellFormedSubtrace(
    std::span<const Event> events);

using LockHeldMap = std::map<LockId, ThreadId>;

// Locks held at position j (0 <= j <= size): acquired before j and not yet
// released, or released at/after j with no intervening acquire. Throws
// std::out_of_range if j > view.size().
LockHeldMap LocksHeldAt(const SubtraceView& view, size_t j);

// nullopt stands for an infinite distance (different lengths). Events are
// compared by thread name, op and operand name, so the traces may use
// different intern tables.
std::optional<size_t> HammingDistance(const Trace& u, const Trace& v);

}  // namespace racetest

#endif  // RACETEST_TRACE_H_
