#include "racetest/rng.h"

#include <limits>
#include <stdexcept>

namespace racetest {

uint64_t Rng::Below(uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::Below needs bound > 0");
  // Rejection keeps the draw exactly uniform.
  const uint64_t limit =
      std::numeric_limits<uint64_t>::max() -
      std::numeric_limits<uint64_t>::max() % bound;
  uint64_t x;
  do {
    x = Next();
  } while (x >= limit);
  return x % bound;
}

uint64_t Rng::InRange(uint64_t lo, uint64_t hi) {
  if (hi < lo) throw std::invalid_argument("Rng::InRange needs lo <= hi");
  if (lo == 0 && hi == std::numeric_limits<uint64_t>::max()) return Next();
  return lo + Below(hi - lo + 1);
}

}  // namespace racetest
