// Shared helpers for the unit and acceptance tests: hand-rolled random trace
// generators and a second, deliberately naive happens-before implementation.

#ifndef RACETEST_TESTS_SUPPORT_H_
#define RACETEST_TESTS_SUPPORT_H_

#include <algorithm>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "racetest/oracle.h"
#include "racetest/trace.h"
#include "racetest/trace_io.h"

namespace racetest::testing {

inline Trace Parse(std::string_view text) {
  return ParseTraceString(text).trace;
}

inline size_t Pick(std::mt19937_64& g, size_t n) {
  return std::uniform_int_distribution<size_t>(0, n - 1)(g);
}

inline bool Coin(std::mt19937_64& g, double p) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(g) < p;
}

struct Shape {
  size_t threads = 3;
  size_t locks = 2;
  size_t vars = 3;
  size_t length = 50;
  double sync = 0.4;   // chance a step is a lock operation
  double write = 0.5;  // chance an access is a write
  bool locs = false;   // attach random source locations
};

// Uniformly random well-formed trace. Lock operations respect mutual
// exclusion but not any nesting discipline; accesses are unrestricted, so
// races appear at random.
inline Trace RandomWellFormed(std::mt19937_64& g, const Shape& s) {
  Trace t;
  std::vector<ThreadId> threads;
  for (size_t i = 0; i < s.threads; ++i) {
    threads.push_back(t.InternThread("t" + std::to_string(i)));
  }
  std::vector<LockId> locks;
  for (size_t i = 0; i < s.locks; ++i) {
    locks.push_back(t.InternLock("l" + std::to_string(i)));
  }
  std::vector<VarId> vars;
  for (size_t i = 0; i < s.vars; ++i) {
    vars.push_back(t.InternVar("x" + std::to_string(i)));
  }
  std::vector<int> holder(s.locks, -1);
  while (t.size() < s.length) {
    const ThreadId th = threads[Pick(g, s.threads)];
    if (s.locks > 0 && Coin(g, s.sync)) {
      const size_t l = Pick(g, s.locks);
      if (holder[l] == -1) {
        holder[l] = static_cast<int>(th);
        t.Append(Event::Acquire(th, locks[l]));
      } else if (holder[l] == static_cast<int>(th)) {
        holder[l] = -1;
        t.Append(Event::Release(th, locks[l]));
      }
      continue;
    }
    LocId loc = kNoLoc;
    if (s.locs && Coin(g, 0.7)) {
      loc = t.InternLoc("f" + std::to_string(Pick(g, 5)) + ".c:" +
                        std::to_string(Pick(g, 100)));
    }
    const VarId x = vars[Pick(g, s.vars)];
    t.Append(Coin(g, s.write) ? Event::Write(th, x, loc)
                              : Event::Read(th, x, loc));
  }
  return t;
}

inline Shape RandomShape(std::mt19937_64& g, size_t max_length) {
  Shape s;
  s.threads = 1 + Pick(g, 4);
  s.locks = Pick(g, 4);
  s.vars = 1 + Pick(g, 4);
  s.length = Pick(g, max_length + 1);
  s.sync = 0.2 + 0.5 * std::uniform_real_distribution<double>()(g);
  s.write = 0.2 + 0.6 * std::uniform_real_distribution<double>()(g);
  return s;
}

// Happens-before by Floyd-Warshall over the base edges, O(n^3).
inline std::vector<std::vector<char>> FloydWarshallHb(
    std::span<const Event> ev) {
  const size_t n = ev.size();
  std::vector<std::vector<char>> hb(n, std::vector<char>(n, 0));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      if (ev[i].thread == ev[j].thread) hb[i][j] = 1;
      if (ev[i].op == Op::kRelease && ev[j].op == Op::kAcquire &&
          ev[i].lock() == ev[j].lock()) {
        hb[i][j] = 1;
      }
    }
  }
  for (size_t k = 0; k < n; ++k) {
    for (size_t i = 0; i < n; ++i) {
      if (!hb[i][k]) continue;
      for (size_t j = 0; j < n; ++j) {
        if (hb[k][j]) hb[i][j] = 1;
      }
    }
  }
  return hb;
}

inline bool NaiveConflict(const Event& a, const Event& b) {
  return a.is_access() && b.is_access() && a.thread != b.thread &&
         a.var() == b.var() && (a.op == Op::kWrite || b.op == Op::kWrite);
}

// Races by Floyd-Warshall, sorted by (second, first), absolute indices.
inline std::vector<RacePair> FloydWarshallRaces(const SubtraceView& view) {
  const auto ev = view.events();
  const auto hb = FloydWarshallHb(ev);
  std::vector<RacePair> out;
  for (size_t j = 0; j < ev.size(); ++j) {
    for (size_t i = 0; i < j; ++i) {
      if (NaiveConflict(ev[i], ev[j]) && !hb[i][j]) {
        out.push_back({view.start() + i, view.start() + j, ev[j].var()});
      }
    }
  }
  return out;
}

inline bool ContainsPair(const std::vector<RacePair>& races, EventIndex first,
                         EventIndex second) {
  return std::any_of(races.begin(), races.end(), [&](const RacePair& p) {
    return p.first == first && p.second == second;
  });
}

}  // namespace racetest::testing

#endif  // RACETEST_TESTS_SUPPORT_H_
