#pragma once

#include <cstdint>
#include <random>

namespace fefet {

// Every random draw in the simulator comes from a generator keyed by
// (master seed, object index, purpose). Streams never share state, so the
// order and degree of parallelism cannot change results.
enum class Stream : std::uint64_t {
  kCoerciveVoltage = 0x11,
  kSwitching = 0x22,
  kAdc = 0x33,
  kQuerySources = 0x44,
  kDataset = 0x55,
  kGraph = 0x66,
  kPayload = 0x77,
  kReplicate = 0x88,
};

using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index,
                                 Stream purpose) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ static_cast<std::uint64_t>(purpose));
  return splitmix64(h ^ index);
}

inline Rng make_rng(std::uint64_t master, std::uint64_t index, Stream purpose) {
  return Rng(mix_seed(master, index, purpose));
}

// Uniform in [0, 1) from the top 53 bits; avoids relying on
// implementation-defined distribution algorithms for the hot path.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace fefet
