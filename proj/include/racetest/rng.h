// Seeded pseudo-random source shared by the samplers and the generator.
//
// The engine is std::mt19937_64 fed the seed directly; bounded draws and
// Bernoulli trials are implemented here rather than with the standard
// distributions, whose algorithms are implementation-defined. Together this
// makes every sampled index sequence reproducible across platforms.

#ifndef RACETEST_RNG_H_
#define RACETEST_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace racetest {

inline constexpr std::string_view kRngName = "mt19937_64";

class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t Next() { return engine_(); }
  // Uniform in [0, bound). bound must be positive.
  uint64_t Below(uint64_t bound);
  // Uniform in [lo, hi], inclusive.
  uint64_t InRange(uint64_t lo, uint64_t hi);
  // Uniform in [0, 1) with 53 bits of precision.
  double Unit() { return static_cast<double>(Next() >> 11) * 0x1.0p-53; }
  bool Bernoulli(double p) { return Unit() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace racetest

#endif  // RACETEST_RNG_H_
