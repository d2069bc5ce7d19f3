#include "racetest/trace_gen.h"

#include <gtest/gtest.h>

#include <random>

#include "racetest/detectors.h"
#include "racetest/oracle.h"
#include "racetest/trace_io.h"
#include "support.h"

namespace racetest {
namespace {

using testing::Parse;

const GenMode kAllModes[] = {
    GenMode::kRaceFreeLocked, GenMode::kRaceFreeSingleThread,
    GenMode::kReadOnly,       GenMode::kDenseRacy,
    GenMode::kSparseRacy,     GenMode::kLongRacesOnly,
    GenMode::kMixed};

GenSpec RandomSpec(std::mt19937_64& g, size_t max_length) {
  GenSpec s;
  s.mode = kAllModes[testing::Pick(g, std::size(kAllModes))];
  s.num_threads = 2 + testing::Pick(g, 7);
  s.num_locks = testing::Pick(g, 5);
  s.num_vars = 1 + testing::Pick(g, 6);
  s.max_nesting = testing::Pick(g, 4);
  s.length = 10 + testing::Pick(g, max_length - 10);
  s.window = 4 + testing::Pick(g, 60);
  s.race_count = testing::Pick(g, s.length / 2 + 1);
  s.min_gap = 1 + testing::Pick(g, s.length - 1);
  s.seed = g();
  return s;
}

TEST(Generator, ModeNamesRoundTrip) {
  for (GenMode m : kAllModes) EXPECT_EQ(GenModeFromName(GenModeName(m)), m);
  EXPECT_FALSE(GenModeFromName("chaotic"));
  EXPECT_EQ(GenModeName(GenMode::kDenseRacy), "dense_racy");
}

TEST(Generator, WellFormedExactLengthAndBoundedNesting) {
  std::mt19937_64 g(100);
  for (int iter = 0; iter < 1000; ++iter) {
    GenSpec s = RandomSpec(g, 400);
    Trace t = GenerateTrace(s);
    ASSERT_EQ(t.size(), s.length) << GenModeName(s.mode);
    ASSERT_FALSE(CheckWellFormed(t)) << GenModeName(s.mode);
    const MeasuredParams mp = MeasureParams(t);
    EXPECT_LE(mp.num_threads, s.num_threads);
    EXPECT_LE(mp.max_locks_held,
              std::min(s.num_locks, s.num_threads * s.max_nesting));
  }
}

TEST(Generator, Deterministic) {
  std::mt19937_64 g(7);
  for (int iter = 0; iter < 50; ++iter) {
    GenSpec s = RandomSpec(g, 300);
    EXPECT_EQ(WriteTraceString(GenerateTrace(s)),
              WriteTraceString(GenerateTrace(s)));
  }
}

TEST(Generator, RaceFreeModesHaveNoOracleRaces) {
  std::mt19937_64 g(8);
  for (GenMode mode : {GenMode::kRaceFreeLocked, GenMode::kRaceFreeSingleThread,
                       GenMode::kReadOnly}) {
    for (int iter = 0; iter < 30; ++iter) {
      GenSpec s = RandomSpec(g, 600);
      s.mode = mode;
      Trace t = GenerateTrace(s);
      EXPECT_TRUE(EnumerateRaces(SubtraceView(t)).empty()) << GenModeName(mode);
    }
  }
}

TEST(Generator, RaceFreeLockedLong) {
  GenSpec s;
  s.length = 10000;
  s.seed = 2;
  EXPECT_TRUE(RunFull(GenerateTrace(s)).reports.empty());
}

TEST(Generator, SingleThreadModeUsesOneThread) {
  GenSpec s;
  s.mode = GenMode::kRaceFreeSingleThread;
  s.num_threads = 8;
  s.length = 500;
  Trace t = GenerateTrace(s);
  EXPECT_EQ(MeasureParams(t).num_threads, 1u);
}

TEST(Generator, ReadOnlyHasNoWrites) {
  GenSpec s;
  s.mode = GenMode::kReadOnly;
  s.length = 2000;
  for (const Event& e : GenerateTrace(s).events()) EXPECT_NE(e.op, Op::kWrite);
}

TEST(Generator, DenseEveryWindowRacy) {
  for (uint64_t seed = 0; seed < 5; ++seed) {
    GenSpec s;
    s.mode = GenMode::kDenseRacy;
    s.length = 3000;
    s.window = 272;
    s.seed = seed;
    Trace t = GenerateTrace(s);
    EXPECT_EQ(CountRacyWindows(t, s.window), s.length - s.window + 1);
  }
}

TEST(Generator, SparseExactRaceCount) {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    GenSpec s;
    s.mode = GenMode::kSparseRacy;
    s.length = 2000;
    s.race_count = 3;
    s.seed = seed;
    EXPECT_EQ(EnumerateRaces(SubtraceView(GenerateTrace(s))).size(), 3u);
  }
  GenSpec s;
  s.mode = GenMode::kSparseRacy;
  s.length = 40;
  s.race_count = 20;
  EXPECT_EQ(EnumerateRaces(SubtraceView(GenerateTrace(s))).size(), 20u);
}

TEST(Generator, LongRacesRespectMinimumGap) {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    GenSpec s;
    s.mode = GenMode::kLongRacesOnly;
    s.length = 3000;
    s.min_gap = 300;
    s.seed = seed;
    auto races = EnumerateRaces(SubtraceView(GenerateTrace(s)));
    EXPECT_FALSE(races.empty());
    for (const RacePair& p : races) EXPECT_GE(p.second - p.first, s.min_gap);
  }
}

TEST(Generator, InfeasibleSpecs) {
  GenSpec s;
  s.mode = GenMode::kDenseRacy;
  s.num_threads = 1;
  s.window = 10;
  EXPECT_THROW(GenerateTrace(s), std::invalid_argument);
  s.num_threads = 2;
  s.window = 2;
  EXPECT_THROW(GenerateTrace(s), std::invalid_argument);
  s.mode = GenMode::kSparseRacy;
  s.length = 10;
  s.race_count = 6;
  EXPECT_THROW(GenerateTrace(s), std::invalid_argument);
  s.mode = GenMode::kLongRacesOnly;
  s.min_gap = 10;
  EXPECT_THROW(GenerateTrace(s), std::invalid_argument);
  s.mode = GenMode::kRaceFreeLocked;
  s.num_threads = 0;
  EXPECT_THROW(GenerateTrace(s), std::invalid_argument);
}

TEST(Measure, TwoThreadsTwoLocks) {
  Trace t = Parse("t1|acq(l1)\nt2|acq(l2)\nt1|rel(l1)\nt2|rel(l2)\n");
  EXPECT_EQ(MeasureParams(t), (MeasuredParams{2, 2}));
}

TEST(Measure, SingleThreadNoLocks) {
  Trace t = Parse("t1|w(x)\nt1|r(y)\n");
  EXPECT_EQ(MeasureParams(t), (MeasuredParams{1, 0}));
}

TEST(Measure, DanglingReleasesCountAsHeld) {
  Trace t = Parse("t1|acq(a)\nt2|acq(b)\nt1|rel(a)\nt2|rel(b)\n");
  EXPECT_EQ(MeasureParams(SubtraceView(t, 2, 4)), (MeasuredParams{2, 2}));
}

TEST(Measure, AgreesWithLocksHeldScan) {
  std::mt19937_64 g(61);
  for (int iter = 0; iter < 200; ++iter) {
    Trace t = testing::RandomWellFormed(g, testing::RandomShape(g, 60));
    const size_t a = testing::Pick(g, t.size() + 1);
    SubtraceView v(t, a, t.size());
    size_t h = 0;
    for (size_t j = 0; j <= v.size(); ++j) h = std::max(h, LocksHeldAt(v, j).size());
    EXPECT_EQ(MeasureParams(v).max_locks_held, h);
  }
}

}  // namespace
}  // namespace racetest
