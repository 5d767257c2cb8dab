#pragma once

#include <cstdint>

namespace dmm::rng {

// Streams keep draws for unrelated purposes statistically independent while
// sharing one top-level seed. A draw is a pure function of
// (seed, stream, counter, index): no generator state is carried between
// draws, so trials can run in any order (or in parallel) and reproduce the
// serial sequence exactly.
enum Stream : std::uint64_t {
  kSupply = 1,
  kArrivalCount = 2,
  kLoadParams = 3,
  kTrial = 4,
  kInstanceGen = 5,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

constexpr std::uint64_t keyed_u64(std::uint64_t seed, std::uint64_t stream,
                                  std::uint64_t counter, std::uint64_t index) {
  std::uint64_t h = splitmix64(seed ^ 0x2545F4914F6CDD1Dull);
  h = splitmix64(h ^ stream);
  h = splitmix64(h ^ counter);
  h = splitmix64(h ^ index);
  return h;
}

// Uniform double in [0, 1) from the top 53 bits.
constexpr double to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

constexpr double uniform01(std::uint64_t seed, std::uint64_t stream,
                           std::uint64_t counter, std::uint64_t index) {
  return to_unit(keyed_u64(seed, stream, counter, index));
}

// Uniform integer in [lo, hi], inclusive.
constexpr int uniform_int(double u01, int lo, int hi) {
  if (hi <= lo) return lo;
  const int span = hi - lo + 1;
  int v = lo + static_cast<int>(u01 * span);
  return v > hi ? hi : v;
}

}  // namespace dmm::rng
