#pragma once

#include <cstdint>
#include <string_view>

namespace wardwalk {

// Finalizer of the splitmix64 generator. Also used on its own to derive
// seeds for independent streams.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// splitmix64 (Steele, Lea & Flood). Fixed-increment counter plus the mix
// above; used here to expand one 64-bit seed into generator state.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return splitmix64_mix(state_);
  }

 private:
  std::uint64_t state_;
};

// xoshiro256++ (Blackman & Vigna), state expanded from a single 64-bit seed
// via splitmix64. The algorithm is fully specified, so identical seeds give
// identical sequences on every platform; reports record kAlgorithm so traces
// stay portable across implementations of the same generator.
class Xoshiro256PlusPlus {
 public:
  static constexpr std::string_view kAlgorithm = "xoshiro256++(splitmix64-seeded)";

  explicit constexpr Xoshiro256PlusPlus(std::uint64_t seed) : state_{} {
    SplitMix64 sm(seed);
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

  // Unbiased draw from [0, n) by modulo rejection: reject outputs below
  // 2^64 mod n, then reduce.
  constexpr std::uint64_t bounded(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  // Uniform double in [0, 1) from the top 53 bits.
  constexpr double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Seed for an independent derived stream (stream 0, 1, ...) of the same
  // run seed. Streams never share draws with the parent.
  static constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64_mix(seed + (stream + 1) * 0x9E3779B97F4A7C15ULL);
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

}  // namespace wardwalk
