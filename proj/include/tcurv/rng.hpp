#pragma once

#include <cstdint>
#include <random>

namespace tcurv {

// splitmix64 step; used to derive well-separated per-instance seeds from a
// master seed so results do not depend on scheduling order.
inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seed for instance `index` of a run seeded with `master`.  Mixing twice
// decorrelates nearby indices.
inline uint64_t stream_seed(uint64_t master, uint64_t index) {
  uint64_t s = master ^ (0x9e3779b97f4a7c15ULL * (index + 1));
  splitmix64(s);
  return splitmix64(s);
}

inline std::mt19937_64 make_rng(uint64_t master, uint64_t index) {
  return std::mt19937_64(stream_seed(master, index));
}

}  // namespace tcurv
