#pragma once

#include <cstdint>
#include <random>

namespace elesim {

// splitmix64 finalizer; stable across platforms, used to derive stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_mix(std::uint64_t seed, std::uint64_t value) {
  return splitmix64(seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2)));
}

// Independent named streams per replicate. Each replicate draws from its own
// generator so batch results do not depend on scheduling or thread count.
enum class Stream : std::uint64_t {
  walk = 1,
  food = 2,
  landscape = 3,
  calibration = 4,
};

inline std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t replicate,
                                 Stream stream = Stream::walk) {
  std::uint64_t h = splitmix64(master_seed);
  h = hash_mix(h, replicate);
  h = hash_mix(h, static_cast<std::uint64_t>(stream));
  return h;
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t master_seed, std::uint64_t replicate,
                    Stream stream = Stream::walk) {
  return Rng(stream_seed(master_seed, replicate, stream));
}

} // namespace elesim
