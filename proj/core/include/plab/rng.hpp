#pragma once

#include <cstdint>

namespace plab {

/// splitmix64 step; the standard 64-bit mixer.
inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Seed for an independent stream: mixes the run seed with a stream index.
/// Gives each Monte Carlo trial its own generator so results do not depend
/// on how trials are scheduled across workers.
inline uint64_t stream_seed(uint64_t seed, uint64_t index) {
  uint64_t state = seed ^ (0xD1B54A32D192ED03ull * (index + 1));
  return splitmix64(state);
}

/// Small deterministic generator built on splitmix64.
class SplitMix {
 public:
  explicit SplitMix(uint64_t seed) : state_(seed) {}
  uint64_t next() { return splitmix64(state_); }
  /// uniform double in [0, 1)
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  uint64_t state_;
};

}  // namespace plab
