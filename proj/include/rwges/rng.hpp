#pragma once

#include <cstdint>
#include <random>

namespace rwges {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

using Rng = std::mt19937_64;

// Independent stream `stream` derived from one 64-bit seed.
inline Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t a = splitmix64(seed ^ splitmix64(stream + 0x5851F42D4C957F2Dull));
  std::uint64_t b = splitmix64(a + stream);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return Rng(seq);
}

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

}  // namespace rwges
