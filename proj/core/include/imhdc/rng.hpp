#pragma once

// Counter-based deterministic randomness.
//
// Every random quantity in the library is a pure function of
// (master seed, purpose tag, index...). Keys are combined with the
// SplitMix64 finalizer; a Stream walks a counter under a fixed key. Results
// are bit-identical across platforms and standard libraries, which is not
// true of the <random> distributions.

#include <cstdint>
#include <limits>
#include <string_view>

namespace imhdc::rng {

inline constexpr std::string_view kGeneratorName = "ctr-splitmix64";
inline constexpr int kGeneratorVersion = 1;

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// FNV-1a over the purpose tag.
constexpr std::uint64_t tag(std::string_view purpose) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char ch : purpose) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001B3ULL;
  }
  return h;
}

constexpr std::uint64_t combine(std::uint64_t key, std::uint64_t value) noexcept {
  return mix64(key ^ mix64(value + kGolden));
}

constexpr std::uint64_t derive(std::uint64_t seed, std::string_view purpose) noexcept {
  return combine(mix64(seed), tag(purpose));
}

constexpr std::uint64_t derive(std::uint64_t seed, std::string_view purpose,
                               std::uint64_t index) noexcept {
  return combine(derive(seed, purpose), index);
}

// Uniform in [0, 1) with 53 bits of resolution.
constexpr double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Standard normal draw from two keyed uniforms (Box-Muller, cosine branch).
double normal_from(std::uint64_t key) noexcept;

// Sequential draws under one key. Satisfies UniformRandomBitGenerator.
class Stream {
 public:
  using result_type = std::uint64_t;

  explicit constexpr Stream(std::uint64_t key) noexcept : key_(key) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  constexpr result_type operator()() noexcept { return next(); }

  constexpr std::uint64_t next() noexcept {
    return mix64(key_ + (++counter_) * kGolden);
  }

  constexpr double uniform() noexcept { return to_unit(next()); }

  // Unbiased integer in [0, bound); bound must be > 0.
  std::uint64_t below(std::uint64_t bound) noexcept;

  double normal() noexcept;

  [[nodiscard]] constexpr std::uint64_t key() const noexcept { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace imhdc::rng
