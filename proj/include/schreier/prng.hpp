#pragma once

#include <cstdint>
#include <vector>

namespace schreier {

/// Stateless splitmix64 output function (Steele/Lea/Flood; Vigna's
/// public-domain constants). Used both as the generator step and as the
/// stream-derivation hash.
inline std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * UINT64_C(0xBF58476D1CE4E5B9);
  z = (z ^ (z >> 27)) * UINT64_C(0x94D049BB133111EB);
  return z ^ (z >> 31);
}

/// Seedable 64-bit generator. Identical seeds reproduce identical streams on
/// every platform; all randomness in the library flows through this type.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += UINT64_C(0x9E3779B97F4A7C15);
    return splitmix64_mix(state_);
  }

  /// Unbiased-enough bounded draw (Lemire's multiply-shift); deterministic.
  std::uint64_t next_below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

 private:
  std::uint64_t state_;
};

/// Child-stream derivation: child = mix(seed + GOLDEN * (index + 1)).
/// Nesting derive_seed calls gives the documented stream tree
/// (seed, level) -> (.., letter) -> (.., vertex).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64_mix(seed + UINT64_C(0x9E3779B97F4A7C15) * (index + 1));
}

/// Fisher-Yates shuffle of 0..d-1 driven by the given stream.
inline std::vector<int> random_permutation(int d, SplitMix64& rng) {
  std::vector<int> p(d);
  for (int i = 0; i < d; ++i) p[i] = i;
  for (int i = d - 1; i > 0; --i) {
    int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i) + 1));
    std::swap(p[i], p[j]);
  }
  return p;
}

}  // namespace schreier
