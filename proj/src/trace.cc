#include "racetest/trace.h"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace racetest {

std::string_view OpToken(Op op) {
  switch (op) {
    case Op::kRead:
      return "r";
    case Op::kWrite:
      return "w";
    case Op::kAcquire:
      return "acq";
    case Op::kRelease:
      return "rel";
  }
  return "?";
}

std::optional<Op> OpFromToken(std::string_view token) {
  if (token == "r") return Op::kRead;
  if (token == "w") return Op::kWrite;
  if (token == "acq") return Op::kAcquire;
  if (token == "rel") return Op::kRelease;
  return std::nullopt;
}

uint32_t InternTable::Intern(std::string_view name) {
  if (auto it = ids_.find(name); it != ids_.end()) return it->second;
  uint32_t id = static_cast<uint32_t>(names_.size());
  names_.emplace_back(name);
  ids_.emplace(names_.back(), id);
  return id;
}

std::optional<uint32_t> InternTable::Find(std::string_view name) const {
  if (auto it = ids_.find(name); it != ids_.end()) return it->second;
  return std::nullopt;
}

uint32_t InternTable::InternFresh(std::string_view base) {
  std::string name(base);
  for (int suffix = 1; ids_.count(name) != 0; ++suffix) {
    name = std::string(base) + "_" + std::to_string(suffix);
  }
  return Intern(name);
}

void Trace::Append(std::string_view thread, Op op, std::string_view operand,
                   std::string_view loc) {
  Event e;
  e.thread = threads_.Intern(thread);
  e.op = op;
  e.operand = IsAccess(op) ? vars_.Intern(operand) : locks_.Intern(operand);
  e.loc = loc.empty() ? kNoLoc : locs_.Intern(loc);
  events_.push_back(e);
}

void Trace::Append(const Event& e) {
  if (!threads_.Contains(e.thread)) {
    throw std::out_of_range("event references unknown thread id");
  }
  const InternTable& operands = e.is_access() ? vars_ : locks_;
  if (!operands.Contains(e.operand)) {
    throw std::out_of_range("event references unknown operand id");
  }
  if (e.loc != kNoLoc && !locs_.Contains(e.loc)) {
    throw std::out_of_range("event references unknown location id");
  }
  events_.push_back(e);
}

Trace Trace::WithEvents(std::vector<Event> events) const {
  Trace out;
  out.threads_ = threads_;
  out.locks_ = locks_;
  out.vars_ = vars_;
  out.locs_ = locs_;
  out.events_ = std::move(events);
  return out;
}

const std::string& Trace::OperandName(const Event& e) const {
  return e.is_access() ? vars_.Name(e.operand) : locks_.Name(e.operand);
}

std::optional<std::string_view> Trace::LocName(LocId loc) const {
  if (loc == kNoLoc || !locs_.Contains(loc)) return std::nullopt;
  return std::string_view(locs_.Name(loc));
}

SubtraceView::SubtraceView(const Trace& base, EventIndex start, EventIndex end)
    : base_(&base), start_(start), end_(end) {
  if (start > base.size() || end > base.size()) {
    throw std::out_of_range("sub-trace bounds exceed trace length");
  }
  if (end_ < start_) end_ = start_;
}

SubtraceView SubtraceView::Slice(size_t i, size_t j) const {
  if (i > size() || j > size()) {
    throw std::out_of_range("slice bounds exceed view length");
  }
  return SubtraceView(*base_, start_ + i, start_ + std::max(i, j));
}

Trace Concatenate(std::span<const SubtraceView> parts) {
  if (parts.empty()) return Trace();
  size_t total = 0;
  for (const auto& p : parts) {
    if (&p.base() != &parts.front().base()) {
      throw std::invalid_argument("concatenated views must share a base");
    }
    total += p.size();
  }
  std::vector<Event> events;
  events.reserve(total);
  for (const auto& p : parts) {
    auto span = p.events();
    events.insert(events.end(), span.begin(), span.end());
  }
  return parts.front().base().WithEvents(std::move(events));
}

std::string_view ViolationReasonName(ViolationReason reason) {
  switch (reason) {
    case ViolationReason::kOverlappingCriticalSection:
      return "overlapping_critical_section";
    case ViolationReason::kReentrantAcquire:
      return "reentrant_acquire";
    case ViolationReason::kUnmatchedRelease:
      return "unmatched_release_of_held_lock";
  }
  return "?";
}

namespace {

std::optional<WellFormednessViolation> CheckLocks(std::span<const Event> events,
                                                  bool allow_dangling) {
  constexpr ThreadId kFree = std::numeric_limits<ThreadId>::max();
  // owner[l] == kFree: not held. seen[l]: any operation on l so far.
  std::vector<ThreadId> owner;
  std::vector<bool> seen;
  for (EventIndex i = 0; i < events.size(); ++i) {
    const Event& e = events[i];
    if (e.is_access()) continue;
    if (e.lock() >= owner.size()) {
      owner.resize(e.lock() + 1, kFree);
      seen.resize(e.lock() + 1, false);
    }
    ThreadId& held_by = owner[e.lock()];
    if (e.op == Op::kAcquire) {
      if (held_by == e.thread) {
        return WellFormednessViolation{i, ViolationReason::kReentrantAcquire};
      }
      if (held_by != kFree) {
        return WellFormednessViolation{
            i, ViolationReason::kOverlappingCriticalSection};
      }
      held_by = e.thread;
    } else {
      bool dangling_ok = allow_dangling && !seen[e.lock()];
      if (held_by != e.thread && !dangling_ok) {
        return WellFormednessViolation{i, ViolationReason::kUnmatchedRelease};
      }
      held_by = kFree;
    }
    seen[e.lock()] = true;
  }
  return std::nullopt;
}

}  // namespace

std::optional<WellFormednessViolation> CheckWellFormed(
    std::span<const Event> events) {
  return CheckLocks(events, /*allow_dangling=*/false);
}

std::optional<WellFormednessViolation> CheckWellFormedSubtrace(
    std::span<const Event> events) {
  return CheckLocks(events, /*allow_dangling=*/true);
}

LockHeldMap LocksHeldAt(const SubtraceView& view, size_t j) {
  if (j > view.size()) throw std::out_of_range("position exceeds view length");
  LockHeldMap held;
  // Prior acquire with no release since.
  for (size_t i = 0; i < j; ++i) {
    const Event& e = view[i];
    if (e.op == Op::kAcquire) {
      held[e.lock()] = e.thread;
    } else if (e.op == Op::kRelease) {
      held.erase(e.lock());
    }
  }
  // Pending release: the first operation on the lock at or after j.
  std::map<LockId, bool> decided;
  for (size_t i = j; i < view.size(); ++i) {
    const Event& e = view[i];
    if (e.is_access() || decided.count(e.lock())) continue;
    decided[e.lock()] = true;
    if (e.op == Op::kRelease) held.emplace(e.lock(), e.thread);
  }
  return held;
}

std::optional<size_t> HammingDistance(const Trace& u, const Trace& v) {
  if (u.size() != v.size()) return std::nullopt;
  size_t distance = 0;
  for (EventIndex i = 0; i < u.size(); ++i) {
    const Event& a = u[i];
    const Event& b = v[i];
    bool same = a.op == b.op && u.ThreadName(a.thread) == v.ThreadName(b.thread) &&
                u.OperandName(a) == v.OperandName(b);
    if (!same) ++distance;
  }
  return distance;
}

}  // namespace racetest
