#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace specdiff {

// Counter-based pseudo-randomness. All randomness in the library is derived
// from a master seed through the two functions below, so any work unit can
// regenerate its own stream from (seed, tag, counter) without shared state.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Seed derivation: derive_seed(master, tag, i) gives component `tag` its own
// stream; adding a component never perturbs another component's stream.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                                 std::uint64_t counter = 0) {
  return splitmix64(master ^ fnv1a64(tag) ^
                    (counter * 0x9e3779b97f4a7c15ULL));
}

// Small stateful generator seeded from a derived stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t x = state_;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  // uniform in [0, 1)
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // standard normal (Box-Muller; consumes two uniforms)
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925287 * u2);
  }

  // uniform integer in [0, n)
  std::uint64_t below(std::uint64_t n) {
    // multiply-shift; bias is negligible for n << 2^64 and irrelevant here
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

 private:
  std::uint64_t state_;
};

// Stateless per-coordinate value, used by lazily materialized sequences:
// the symbol at coordinate j is a pure function of (seed, j).
inline double coordinate_uniform(std::uint64_t seed, std::int64_t coord) {
  std::uint64_t x =
      splitmix64(seed ^ (static_cast<std::uint64_t>(coord) *
                         0xd1342543de82ef95ULL));
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

}  // namespace specdiff
