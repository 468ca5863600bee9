#ifndef ZIPPERLAB_SEEDING_HPP
#define ZIPPERLAB_SEEDING_HPP

#include <cstdint>
#include <random>

namespace zipperlab {

/// splitmix64 finalizer; full-avalanche 64-bit mixer.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based stream identity: (master_seed, stream_id) -> one RNG stream.
///
/// Streams are derived by hashing, never by jumping, so any worker can open
/// its stream directly from the pair. Identical pairs reproduce identical
/// output; distinct pairs give statistically independent streams.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;

  /// Sub-stream k of this stream (per Monte Carlo task, grid point, ...).
  SeedSpec child(std::uint64_t k) const {
    return SeedSpec{master_seed, mix64(stream_id ^ mix64(k + 0x517cc1b727220a95ULL))};
  }

  /// Stream addressed by a (possibly negative) lattice site index.
  SeedSpec for_site(std::int64_t site) const {
    // zig-zag encode so negative sites get distinct streams
    const std::uint64_t z =
        (static_cast<std::uint64_t>(site) << 1) ^ static_cast<std::uint64_t>(site >> 63);
    return SeedSpec{master_seed, mix64(stream_id ^ mix64(z + 0x2545f4914f6cdd1dULL))};
  }

  std::uint64_t hash() const { return mix64(mix64(master_seed) ^ stream_id); }

  /// Engine seeded from the hashed pair.
  std::mt19937_64 engine() const { return std::mt19937_64(hash()); }
};

/// Uniform double in [0,1) from the top 53 bits; identical across platforms.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace zipperlab

#endif
