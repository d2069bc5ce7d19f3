// Brute-force happens-before closure and race enumeration for small traces.
// Used to validate the streaming detectors, never to detect at scale.

#ifndef RACETEST_ORACLE_H_
#define RACETEST_ORACLE_H_

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "racetest/trace.h"

namespace racetest {

inline constexpr size_t kDefaultOracleCap = 10000;

class OracleCapExceeded : public std::length_error {
 public:
  OracleCapExceeded(size_t length, size_t cap);
};

// ordered(i, j) == (e_i happens-before e_j), indices relative to the view.
class HbRelation {
 public:
  explicit HbRelation(size_t n);

  size_t size() const { return n_; }
  bool ordered(size_t i, size_t j) const {
    return (rows_[j * words_ + (i >> 6)] >> (i & 63)) & 1;
  }

 private:
  friend HbRelation HbClosure(const SubtraceView&, size_t);

  // Row j holds the predecessor set of event j.
  uint64_t* row(size_t j) { return &rows_[j * words_]; }
  const uint64_t* row(size_t j) const { return &rows_[j * words_]; }

  size_t n_;
  size_t words_;
  std::vector<uint64_t> rows_;
};

// Transitive closure of program order and release-to-later-acquire edges on
// the same lock, by forward propagation in trace order.
HbRelation HbClosure(const SubtraceView& view, size_t cap = kDefaultOracleCap);

// A conflicting, unordered pair; indices are absolute in the base trace.
struct RacePair {
  EventIndex first;
  EventIndex second;
  VarId var;
  friend bool operator==(const RacePair&, const RacePair&) = default;
};

bool Conflicting(const Event& a, const Event& b);

// All HB-races in the view, sorted by (second, first).
std::vector<RacePair> EnumerateRaces(const SubtraceView& view,
                                     size_t cap = kDefaultOracleCap);
bool HasRace(const SubtraceView& view, size_t cap = kDefaultOracleCap);

// Checks for every pair i < j that ordering in the whole trace equals
// ordering computed on the slice [i, j + 1).
bool VerifyContextFree(const Trace& trace, size_t cap = kDefaultOracleCap);

// Number of window starts i in [0, n - k] whose window [i, i + k) contains a
// race. Windows are sharded across `workers` threads (0 = hardware
// concurrency). Throws std::invalid_argument if k > n or k == 0.
size_t CountRacyWindows(const Trace& trace, size_t k,
                        size_t cap = kDefaultOracleCap, unsigned workers = 0);

}  // namespace racetest

#endif  // RACETEST_ORACLE_H_
