#include "racetest/construction.h"

#include <stdexcept>

#include "racetest/trace_gen.h"
#include "racetest/vector_clock.h"

namespace racetest {

Connector BuildConnector(const SubtraceView& first, const SubtraceView& second,
                         std::span<const ThreadId> threads,
                         const ConnectorResources& resources,
                         std::optional<size_t> pad_to) {
  Connector mu;
  const LockHeldMap held_at_end = LocksHeldAt(first, first.size());
  const LockHeldMap held_at_begin = LocksHeldAt(second, 0);
  const LockId star = resources.order_lock;

  if (auto it = held_at_end.find(star); it != held_at_end.end()) {
    mu.events.push_back(Event::Release(it->second, star));
  }
  for (int round = 0; round < 2; ++round) {
    for (ThreadId t : threads) {
      mu.events.push_back(Event::Acquire(t, star));
      mu.events.push_back(Event::Release(t, star));
    }
  }
  for (const auto& [lock, thread] : held_at_end) {
    if (lock != star) mu.events.push_back(Event::Release(thread, lock));
  }
  for (const auto& [lock, thread] : held_at_begin) {
    mu.events.push_back(Event::Acquire(thread, lock));
  }
  mu.unpadded_length = mu.events.size();

  if (pad_to) {
    if (*pad_to < mu.unpadded_length) {
      throw std::invalid_argument(
          "connector needs " + std::to_string(mu.unpadded_length) +
          " events, cannot pad to " + std::to_string(*pad_to));
    }
    while (mu.events.size() < *pad_to) {
      mu.events.push_back(Event::Read(resources.pad_thread, resources.pad_var));
    }
    mu.padded_to = pad_to;
  }
  return mu;
}

Segmentation GreedyRacySegments(const Trace& trace, size_t m) {
  if (m == 0) throw std::invalid_argument("segment gap m must be positive");
  Segmentation result;
  result.m = m;
  const size_t n = trace.size();
  if (n == 0) return result;

  std::vector<RaceReport> reports;
  EventIndex begin = 0;
  while (begin < n) {
    DetectorState state(trace.num_threads());
    std::optional<EventIndex> end;
    for (EventIndex i = begin; i < n; ++i) {
      if (state.Step(i, trace[i], reports) > 0) {
        end = i + 1;
        break;
      }
    }
    if (!end) break;
    result.segments.push_back({begin, *end});
    const EventIndex next = *end + m - 1;
    if (next >= n) break;
    begin = next;
  }
  return result;
}

Projection RaceFreeProjection(const Trace& trace, std::optional<size_t> m) {
  Projection out;
  const size_t n = trace.size();
  if (n == 0) {
    out.projected = trace;
    return out;
  }
  const MeasuredParams measured = MeasureParams(trace);
  out.m = m.value_or(4 * measured.num_threads + 2 * measured.max_locks_held);

  const Segmentation seg = GreedyRacySegments(trace, out.m);
  out.segments = seg.segments.size();
  if (seg.segments.empty()) {
    out.projected = trace;
    return out;
  }

  Trace projected = trace.WithEvents({});
  ConnectorResources resources;
  resources.order_lock = projected.FreshLock("rpt_order");
  resources.pad_var = projected.FreshVar("rpt_pad");
  resources.pad_thread = 0;
  std::vector<ThreadId> threads(trace.num_threads());
  for (ThreadId t = 0; t < threads.size(); ++t) threads[t] = t;

  std::vector<Event> events;
  events.reserve(n);
  auto append = [&](const SubtraceView& v) {
    auto span = v.events();
    events.insert(events.end(), span.begin(), span.end());
  };
  auto piece = [&](size_t j) {
    const Segment& s = seg.segments[j];
    return SubtraceView(trace, s.begin, s.end - 1);
  };

  for (size_t j = 0; j < seg.segments.size(); ++j) {
    const SubtraceView current = piece(j);
    append(current);
    if (j + 1 < seg.segments.size()) {
      Connector mu = BuildConnector(current, piece(j + 1), threads, resources,
                                    out.m);
      events.insert(events.end(), mu.events.begin(), mu.events.end());
      continue;
    }
    // Final block.
    const EventIndex tail_start = seg.segments[j].end + out.m - 1;
    if (tail_start >= n) {
      while (events.size() < n) {
        events.push_back(Event::Read(resources.pad_thread, resources.pad_var));
      }
    } else {
      const SubtraceView tail(trace, tail_start, n);
      Connector mu =
          BuildConnector(current, tail, threads, resources, out.m);
      events.insert(events.end(), mu.events.begin(), mu.events.end());
      append(tail);
    }
  }

  out.projected = projected.WithEvents(std::move(events));
  out.changed = HammingDistance(trace, out.projected).value_or(n);
  return out;
}

}  // namespace racetest
