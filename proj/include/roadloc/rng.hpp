// Deterministic random number generation for maps, observations, and
// Monte Carlo trials.
//
// Everything here is fixed-algorithm so that a given seed produces the
// same stream on any platform:
//
//   * splitmix64  — seed expansion / 64-bit mixing (Steele, Lea, Flood).
//   * xoshiro256++ — the stream generator (Blackman & Vigna).
//   * gaussian deviates — basic Box-Muller; each pair of normals consumes
//     exactly two 64-bit draws, u1 in (0,1], u2 in [0,1).
//
// Trial seeds are derived, not sequential: derive_seed(master, i, t)
// mixes the master seed with the amplitude index and trial index, so
// trials can run in any order or in parallel with identical results.

#ifndef ROADLOC_RNG_HPP
#define ROADLOC_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <span>

namespace roadloc {

/// splitmix64 finalizer: bijective 64-bit mix.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// splitmix64 stream, used only to expand seeds into generator state.
struct SplitMix64 {
  std::uint64_t state;

  constexpr std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ull;
    return mix64(state);
  }
};

/// Documented trial-seed derivation:
///   s0 = mix64(master ^ (0x9e3779b97f4a7c15 * (stream_a + 1)))
///   s  = mix64(s0     ^ (0xc2b2ae3d27d4eb4f * (stream_b + 1)))
/// stream_a is the amplitude index, stream_b the trial index.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream_a,
                                    std::uint64_t stream_b) {
  const std::uint64_t s0 = mix64(master ^ (0x9e3779b97f4a7c15ull * (stream_a + 1)));
  return mix64(s0 ^ (0xc2b2ae3d27d4eb4full * (stream_b + 1)));
}

/// xoshiro256++ generator. State is seeded through splitmix64 so any
/// 64-bit seed (including 0) yields a valid nonzero state.
class Xoshiro256pp {
 public:
  explicit constexpr Xoshiro256pp(std::uint64_t seed) {
    SplitMix64 sm{seed};
    for (auto& word : state_) word = sm.next();
  }

  constexpr std::uint64_t next() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1): top 53 bits of one draw.
  constexpr double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform double in (0, 1]: never zero, safe under log().
  constexpr double uniform01_open() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  /// Fair sign: top bit of one draw, true with probability 1/2.
  constexpr bool sign_bit() { return (next() >> 63) != 0; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
};

/// One Box-Muller pair of independent standard normals.
inline std::array<double, 2> gaussian_pair(Xoshiro256pp& rng) {
  const double u1 = rng.uniform01_open();
  const double u2 = rng.uniform01();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * 3.14159265358979323846 * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

/// Fills `out` with standard normals, ceil(n/2) Box-Muller pairs in order;
/// an odd count discards the second member of the final pair.
inline void fill_gaussian(Xoshiro256pp& rng, std::span<double> out) {
  std::size_t i = 0;
  while (i + 1 < out.size()) {
    const auto pair = gaussian_pair(rng);
    out[i] = pair[0];
    out[i + 1] = pair[1];
    i += 2;
  }
  if (i < out.size()) out[i] = gaussian_pair(rng)[0];
}

}  // namespace roadloc

#endif  // ROADLOC_RNG_HPP
