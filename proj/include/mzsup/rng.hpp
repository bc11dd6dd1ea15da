#pragma once

// Deterministic, platform-independent randomness for the trial runner.
//
// Generator: xoshiro256** (Blackman & Vigna, public domain), state expanded
// from a 64-bit seed with the splitmix64 sequence. Everything is exact 64-bit
// integer arithmetic, so a given seed yields the same draws on every platform.
//
// Streams: stream k of seed s starts splitmix64 at mix64(s ^ mix64(k)), where
// mix64 is the splitmix64 finalizer. Distinct (seed, stream) pairs land in
// well-separated parts of the state space; the trial runner maps trial index i
// to stream i / kTrialsPerStream at offset i % kTrialsPerStream, so a trial's
// randomness depends only on (seed, i) and never on how a run is partitioned.

#include <cstdint>

namespace mzsup {

inline constexpr const char* kRngAlgorithm = "xoshiro256** / splitmix64 streams";

inline constexpr std::uint64_t kTrialsPerStream = 4096;

// splitmix64 output finalizer; bijective mix of a 64-bit word.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

class Xoshiro256StarStar {
 public:
  explicit Xoshiro256StarStar(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& word : state_) word = sm.next();
  }

  static Xoshiro256StarStar stream(std::uint64_t seed, std::uint64_t stream_index) {
    return Xoshiro256StarStar(mix64(seed ^ mix64(stream_index)));
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1) with 53 random mantissa bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  void discard(std::uint64_t n) {
    for (std::uint64_t i = 0; i < n; ++i) next();
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

}  // namespace mzsup
