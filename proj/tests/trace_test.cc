#include "racetest/trace.h"

#include <gtest/gtest.h>

#include <random>

#include "support.h"

namespace racetest {
namespace {

using testing::Parse;

TEST(WellFormed, MatchedCriticalSection) {
  EXPECT_FALSE(CheckWellFormed(Parse("t1|acq(l)\nt1|rel(l)\n")));
}

TEST(WellFormed, OverlappingCriticalSection) {
  auto v = CheckWellFormed(Parse("t1|acq(l)\nt2|acq(l)\n"));
  ASSERT_TRUE(v);
  EXPECT_EQ(v->index, 1u);
  EXPECT_EQ(v->reason, ViolationReason::kOverlappingCriticalSection);
}

TEST(WellFormed, ReentrantAcquire) {
  auto v = CheckWellFormed(Parse("t1|acq(l)\nt1|acq(l)\n"));
  ASSERT_TRUE(v);
  EXPECT_EQ(v->index, 1u);
  EXPECT_EQ(v->reason, ViolationReason::kReentrantAcquire);
}

TEST(WellFormed, ReleaseWithoutAcquire) {
  auto v = CheckWellFormed(Parse("t1|w(x)\nt1|rel(l)\n"));
  ASSERT_TRUE(v);
  EXPECT_EQ(v->index, 1u);
  EXPECT_EQ(v->reason, ViolationReason::kUnmatchedRelease);
}

TEST(WellFormed, ReleaseByOtherThread) {
  auto v = CheckWellFormed(Parse("t1|acq(l)\nt2|rel(l)\n"));
  ASSERT_TRUE(v);
  EXPECT_EQ(v->index, 1u);
  EXPECT_EQ(v->reason, ViolationReason::kUnmatchedRelease);
}

TEST(WellFormed, EmptyAndDanglingAcquire) {
  EXPECT_FALSE(CheckWellFormed(Trace{}));
  EXPECT_FALSE(CheckWellFormed(Parse("t1|acq(l)\nt1|w(x)\n")));
}

TEST(WellFormed, SubtraceAllowsLeadingRelease) {
  Trace t = Parse("t1|rel(l)\nt2|acq(l)\nt2|rel(l)\n");
  EXPECT_TRUE(CheckWellFormed(t));
  EXPECT_FALSE(CheckWellFormedSubtrace(t.events()));
  // A second release of l by t1 cannot be dangling any more.
  Trace bad = Parse("t1|rel(l)\nt1|rel(l)\n");
  EXPECT_TRUE(CheckWellFormedSubtrace(bad.events()));
}

TEST(WellFormed, EverySliceOfWellFormedIsWellFormedSubtrace) {
  std::mt19937_64 g(11);
  for (int iter = 0; iter < 200; ++iter) {
    Trace t = testing::RandomWellFormed(g, testing::RandomShape(g, 60));
    ASSERT_FALSE(CheckWellFormed(t));
    const size_t n = t.size();
    const size_t i = n ? testing::Pick(g, n + 1) : 0;
    const size_t j = i + (n - i ? testing::Pick(g, n - i + 1) : 0);
    SubtraceView v(t, i, j);
    EXPECT_FALSE(CheckWellFormedSubtrace(v.events()));
  }
}

TEST(LocksHeld, AcquiredLockIsHeldAfterIt) {
  Trace t = Parse("t1|acq(l)\n");
  auto held = LocksHeldAt(SubtraceView(t), 1);
  ASSERT_EQ(held.size(), 1u);
  EXPECT_EQ(held.at(*t.locks().Find("l")), *t.threads().Find("t1"));
}

TEST(LocksHeld, PendingReleaseMeansHeldAtStart) {
  Trace t = Parse("t1|rel(l)\n");
  auto held = LocksHeldAt(SubtraceView(t), 0);
  ASSERT_EQ(held.size(), 1u);
  EXPECT_EQ(held.at(*t.locks().Find("l")), *t.threads().Find("t1"));
  EXPECT_TRUE(LocksHeldAt(SubtraceView(t), 1).empty());
}

TEST(LocksHeld, ClosedCriticalSection) {
  Trace t = Parse("t1|acq(l)\nt1|rel(l)\n");
  EXPECT_TRUE(LocksHeldAt(SubtraceView(t), 2).empty());
  EXPECT_TRUE(LocksHeldAt(SubtraceView(t), 0).empty());
  EXPECT_EQ(LocksHeldAt(SubtraceView(t), 1).size(), 1u);
}

TEST(LocksHeld, PositionOutOfRange) {
  Trace t = Parse("t1|acq(l)\n");
  EXPECT_THROW(LocksHeldAt(SubtraceView(t), 2), std::out_of_range);
}

// Direct transcription of the two clauses, for every (lock, thread) pair.
bool HeldBruteForce(const SubtraceView& v, size_t j, LockId l, ThreadId t) {
  for (size_t i = 0; i < j; ++i) {
    const Event& e = v[i];
    if (e.op != Op::kAcquire || e.lock() != l || e.thread != t) continue;
    bool released = false;
    for (size_t k = i + 1; k < j; ++k) {
      if (v[k].op == Op::kRelease && v[k].lock() == l) released = true;
    }
    if (!released) return true;
  }
  for (size_t i = j; i < v.size(); ++i) {
    const Event& e = v[i];
    if (!IsSync(e.op) || e.lock() != l) continue;
    return e.op == Op::kRelease && e.thread == t;
  }
  return false;
}

TEST(LocksHeld, AtMostOneHolderAndMatchesDefinition) {
  std::mt19937_64 g(5);
  for (int iter = 0; iter < 150; ++iter) {
    Trace t = testing::RandomWellFormed(g, testing::RandomShape(g, 40));
    const size_t n = t.size();
    const size_t a = n ? testing::Pick(g, n + 1) : 0;
    const size_t b = a + (n - a ? testing::Pick(g, n - a + 1) : 0);
    SubtraceView v(t, a, b);
    for (size_t j = 0; j <= v.size(); ++j) {
      auto held = LocksHeldAt(v, j);
      for (LockId l = 0; l < t.locks().size(); ++l) {
        size_t holders = 0;
        for (ThreadId th = 0; th < t.num_threads(); ++th) {
          if (HeldBruteForce(v, j, l, th)) {
            ++holders;
            ASSERT_TRUE(held.count(l));
            EXPECT_EQ(held.at(l), th);
          }
        }
        ASSERT_LE(holders, 1u);
        if (holders == 0) { EXPECT_FALSE(held.count(l)); }
      }
    }
  }
}

TEST(Hamming, IdenticalTraces) {
  Trace u = Parse("t1|w(x)\nt2|r(x)\n");
  EXPECT_EQ(HammingDistance(u, u), 0u);
}

TEST(Hamming, DifferentLengthsAreInfinitelyFar) {
  Trace u = Parse("t1|w(x)\nt1|w(x)\nt1|w(x)\n");
  Trace v = Parse("t1|w(x)\nt1|w(x)\nt1|w(x)\nt1|w(x)\n");
  EXPECT_FALSE(HammingDistance(u, v).has_value());
}

TEST(Hamming, SingleSubstitution) {
  Trace u = Parse("t1|w(x)\nt1|w(x)\nt1|w(x)\nt1|w(x)\n");
  Trace v = Parse("t1|w(x)\nt1|w(x)\nt1|r(x)\nt1|w(x)\n");
  EXPECT_EQ(HammingDistance(u, v), 1u);
}

TEST(Hamming, IgnoresSourceLocationsAndIdAssignment) {
  Trace u = Parse("a|w(x)|A.c:1\nb|w(y)\n");
  Trace v = Parse("b|w(y)\na|w(x)|B.c:9\n");
  // Same names at different positions.
  EXPECT_EQ(HammingDistance(u, v), 2u);
  Trace w = Parse("z|r(q)\na|w(x)|C.c:3\nb|w(y)\n");
  Trace w2 = w.WithEvents({w[1], w[2]});
  EXPECT_EQ(HammingDistance(u, w2), 0u);
}

TEST(Hamming, MetricOnRandomTriples) {
  std::mt19937_64 g(3);
  for (int iter = 0; iter < 300; ++iter) {
    testing::Shape s;
    s.length = testing::Pick(g, 30);
    Trace base = testing::RandomWellFormed(g, s);
    auto mutate = [&](const Trace& t) {
      std::vector<Event> ev = t.events();
      for (Event& e : ev) {
        if (testing::Coin(g, 0.3)) {
          e.thread = static_cast<ThreadId>(testing::Pick(g, t.num_threads()));
          e.op = testing::Coin(g, 0.5) ? Op::kRead : Op::kWrite;
          e.operand = static_cast<VarId>(testing::Pick(g, t.vars().size()));
        }
      }
      return t.WithEvents(std::move(ev));
    };
    Trace a = mutate(base), b = mutate(base), c = mutate(base);
    const size_t ab = *HammingDistance(a, b);
    const size_t bc = *HammingDistance(b, c);
    const size_t ac = *HammingDistance(a, c);
    EXPECT_EQ(ab, *HammingDistance(b, a));
    EXPECT_LE(ac, ab + bc);
    bool same = true;
    for (size_t i = 0; i < a.size(); ++i) same &= a[i].SameAction(b[i]);
    EXPECT_EQ(ab == 0, same);
  }
}

TEST(Subtrace, SliceThenConcatenateRestores) {
  std::mt19937_64 g(9);
  for (int iter = 0; iter < 200; ++iter) {
    Trace t = testing::RandomWellFormed(g, testing::RandomShape(g, 80));
    std::vector<size_t> cuts{0, t.size()};
    const size_t extra = testing::Pick(g, 5);
    for (size_t c = 0; c < extra; ++c) cuts.push_back(testing::Pick(g, t.size() + 1));
    std::sort(cuts.begin(), cuts.end());
    std::vector<SubtraceView> parts;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
      parts.emplace_back(t, cuts[i], cuts[i + 1]);
    }
    Trace joined = Concatenate(parts);
    EXPECT_EQ(joined.events(), t.events());
    EXPECT_EQ(HammingDistance(joined, t), 0u);
  }
}

TEST(Subtrace, ViewBoundsAndRelativeIndexing) {
  Trace t = Parse("t1|w(x)\nt2|w(y)\nt3|w(z)\n");
  SubtraceView v(t, 1, 3);
  EXPECT_EQ(v.size(), 2u);
  EXPECT_EQ(t.OperandName(v[0]), "y");
  SubtraceView s = v.Slice(1, 2);
  EXPECT_EQ(s.start(), 2u);
  EXPECT_EQ(t.OperandName(s[0]), "z");
  EXPECT_TRUE(SubtraceView(t, 2, 1).empty());
  EXPECT_THROW(SubtraceView(t, 0, 4), std::out_of_range);
}

TEST(Trace, InterningIsFirstAppearance) {
  Trace t = Parse("b|w(y)\na|acq(m)\nb|r(x)\n");
  EXPECT_EQ(t.ThreadName(0), "b");
  EXPECT_EQ(t.ThreadName(1), "a");
  EXPECT_EQ(*t.vars().Find("y"), 0u);
  EXPECT_EQ(*t.vars().Find("x"), 1u);
  EXPECT_EQ(*t.locks().Find("m"), 0u);
}

TEST(Trace, FreshNamesAvoidCollisions) {
  Trace t = Parse("t|acq(rpt_order)\nt|rel(rpt_order)\n");
  const LockId fresh = t.FreshLock("rpt_order");
  EXPECT_NE(fresh, *t.locks().Find("rpt_order"));
  EXPECT_NE(t.locks().Name(fresh), "rpt_order");
}

TEST(Trace, AppendRejectsUnknownIds) {
  Trace t;
  t.InternThread("t");
  EXPECT_THROW(t.Append(Event::Write(0, 0)), std::out_of_range);
  EXPECT_THROW(t.Append(Event::Acquire(3, 0)), std::out_of_range);
}

}  // namespace
}  // namespace racetest
