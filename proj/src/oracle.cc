#include "racetest/oracle.h"

#include <algorithm>
#include <atomic>
#include <thread>
#include <unordered_map>

namespace racetest {

OracleCapExceeded::OracleCapExceeded(size_t length, size_t cap)
    : std::length_error("oracle input of " + std::to_string(length) +
                        " events exceeds cap " + std::to_string(cap)) {}

HbRelation::HbRelation(size_t n)
    : n_(n), words_((n + 63) / 64), rows_(n * words_, 0) {}

HbRelation HbClosure(const SubtraceView& view, size_t cap) {
  const size_t n = view.size();
  if (n > cap) throw OracleCapExceeded(n, cap);
  HbRelation hb(n);
  const size_t words = hb.words_;

  auto merge_with_self = [&](uint64_t* dst, size_t pred) {
    const uint64_t* src = hb.row(pred);
    for (size_t w = 0; w < words; ++w) dst[w] |= src[w];
    dst[pred >> 6] |= uint64_t{1} << (pred & 63);
  };

  constexpr size_t kNone = static_cast<size_t>(-1);
  std::vector<size_t> last_of_thread(view.base().threads().size(), kNone);
  // Union of (pred(r) + r) over every earlier release r of the lock.
  std::vector<std::vector<uint64_t>> released(view.base().locks().size());

  for (size_t j = 0; j < n; ++j) {
    const Event& e = view[j];
    uint64_t* row = hb.row(j);
    if (last_of_thread[e.thread] != kNone) {
      merge_with_self(row, last_of_thread[e.thread]);
    }
    if (e.op == Op::kAcquire) {
      const auto& acc = released[e.lock()];
      if (!acc.empty()) {
        for (size_t w = 0; w < words; ++w) row[w] |= acc[w];
      }
    } else if (e.op == Op::kRelease) {
      auto& acc = released[e.lock()];
      if (acc.empty()) acc.assign(words, 0);
      merge_with_self(acc.data(), j);
    }
    last_of_thread[e.thread] = j;
  }
  return hb;
}

bool Conflicting(const Event& a, const Event& b) {
  return a.is_access() && b.is_access() && a.thread != b.thread &&
         a.var() == b.var() && (a.op == Op::kWrite || b.op == Op::kWrite);
}

std::vector<RacePair> EnumerateRaces(const SubtraceView& view, size_t cap) {
  HbRelation hb = HbClosure(view, cap);
  std::unordered_map<VarId, std::vector<size_t>> accesses;
  std::vector<RacePair> races;
  for (size_t j = 0; j < view.size(); ++j) {
    const Event& e = view[j];
    if (!e.is_access()) continue;
    auto& prior = accesses[e.var()];
    for (size_t i : prior) {
      if (Conflicting(view[i], e) && !hb.ordered(i, j)) {
        races.push_back({view.start() + i, view.start() + j, e.var()});
      }
    }
    prior.push_back(j);
  }
  // Generated in increasing second index, increasing first within it.
  return races;
}

bool HasRace(const SubtraceView& view, size_t cap) {
  HbRelation hb = HbClosure(view, cap);
  std::unordered_map<VarId, std::vector<size_t>> accesses;
  for (size_t j = 0; j < view.size(); ++j) {
    const Event& e = view[j];
    if (!e.is_access()) continue;
    auto& prior = accesses[e.var()];
    for (size_t i : prior) {
      if (Conflicting(view[i], e) && !hb.ordered(i, j)) return true;
    }
    prior.push_back(j);
  }
  return false;
}

bool VerifyContextFree(const Trace& trace, size_t cap) {
  SubtraceView whole(trace);
  HbRelation full = HbClosure(whole, cap);
  for (size_t i = 0; i < trace.size(); ++i) {
    for (size_t j = i + 1; j < trace.size(); ++j) {
      HbRelation local = HbClosure(SubtraceView(trace, i, j + 1), cap);
      if (full.ordered(i, j) != local.ordered(0, j - i)) return false;
    }
  }
  return true;
}

size_t CountRacyWindows(const Trace& trace, size_t k, size_t cap,
                        unsigned workers) {
  const size_t n = trace.size();
  if (k == 0 || k > n) {
    throw std::invalid_argument("window length must be in [1, trace length]");
  }
  if (k > cap) throw OracleCapExceeded(k, cap);
  const size_t num_windows = n - k + 1;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(
      std::min<size_t>(workers, num_windows));

  std::atomic<size_t> next{0};
  std::atomic<size_t> racy{0};
  auto work = [&] {
    size_t local = 0;
    for (size_t i = next++; i < num_windows; i = next++) {
      if (HasRace(SubtraceView(trace, i, i + k), cap)) ++local;
    }
    racy += local;
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return racy.load();
}

}  // namespace racetest
