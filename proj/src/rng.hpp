#pragma once

#include <cstdint>

#include "error.hpp"

namespace qhfmp {

// splitmix64 output function.
constexpr uint64_t mix64(uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

inline constexpr uint64_t kGolden64 = 0x9E3779B97F4A7C15ull;

// Counter-based seed splitting: sub-stream k of a master seed is
// mix64(master + (k + 1) * golden). Every trial owns an independent stream
// keyed by its index, so results do not depend on execution order or on how
// trials are assigned to threads.
constexpr uint64_t derive_seed(uint64_t master, uint64_t counter) {
  return mix64(master + (counter + 1) * kGolden64);
}

class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    state_ += kGolden64;
    return mix64(state_);
  }

  uint8_t next_bit() { return static_cast<uint8_t>(next() >> 63); }

  uint8_t next_byte() { return static_cast<uint8_t>(next() >> 56); }

  // Unbiased draw from [0, bound) by rejection.
  uint64_t next_below(uint64_t bound) {
    if (bound == 0) raise(Errc::invalid_argument, "next_below needs a positive bound");
    const uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

 private:
  uint64_t state_;
};

}  // namespace qhfmp
