#pragma once

// Bit-packed binary hypervectors and their dimension-preserving algebra.
//
// Component j lives in word j / 64 at bit j % 64. Bits past dim() in the
// last word are always zero; every operation restores that invariant.
// Permutations move component j toward higher indices: a circular shift by 1
// maps j -> (j + 1) mod dim, and a plain right shift by 1 drops component
// dim - 1 and feeds a zero into component 0.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace imhdc {

enum class Shift { circular, plain_right, plain_left };

class Hypervector {
 public:
  using word_type = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  // All-zero vector. Throws InvalidArgument when dim == 0.
  explicit Hypervector(std::size_t dim);

  static Hypervector zeros(std::size_t dim) { return Hypervector(dim); }
  static Hypervector ones(std::size_t dim);
  // I.i.d. fair bits from the counter-based generator keyed by seed.
  static Hypervector random(std::size_t dim, std::uint64_t seed);
  // '0'/'1' characters, character i is component i.
  static Hypervector from_string(std::string_view bits);
  // Padding bits in the last word are cleared.
  static Hypervector from_words(std::size_t dim, std::span<const word_type> words);

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] std::size_t word_count() const noexcept { return words_.size(); }
  [[nodiscard]] std::span<const word_type> words() const noexcept { return words_; }
  [[nodiscard]] std::span<word_type> mutable_words() noexcept { return words_; }

  [[nodiscard]] bool get(std::size_t j) const;
  void set(std::size_t j, bool value);

  [[nodiscard]] std::size_t popcount() const noexcept;
  [[nodiscard]] std::string to_string() const;

  // Mask of live bits in the last word.
  [[nodiscard]] word_type tail_mask() const noexcept;
  [[nodiscard]] bool padding_is_zero() const noexcept;
  void canonicalize() noexcept;

  Hypervector& operator&=(const Hypervector& rhs);
  Hypervector& operator|=(const Hypervector& rhs);
  Hypervector& operator^=(const Hypervector& rhs);
  // In-place component-wise XNOR.
  Hypervector& xnor_assign(const Hypervector& rhs);
  Hypervector& flip() noexcept;

  friend bool operator==(const Hypervector&, const Hypervector&) = default;

 private:
  std::size_t dim_;
  std::vector<word_type> words_;
};

[[nodiscard]] constexpr std::size_t words_for(std::size_t dim) noexcept {
  return (dim + Hypervector::kWordBits - 1) / Hypervector::kWordBits;
}

Hypervector xnor(const Hypervector& a, const Hypervector& b);
Hypervector bit_xor(const Hypervector& a, const Hypervector& b);
Hypervector bit_and(const Hypervector& a, const Hypervector& b);
Hypervector bit_or(const Hypervector& a, const Hypervector& b);
Hypervector bit_not(const Hypervector& a);

inline Hypervector operator&(const Hypervector& a, const Hypervector& b) { return bit_and(a, b); }
inline Hypervector operator|(const Hypervector& a, const Hypervector& b) { return bit_or(a, b); }
inline Hypervector operator^(const Hypervector& a, const Hypervector& b) { return bit_xor(a, b); }
inline Hypervector operator~(const Hypervector& a) { return bit_not(a); }

// Requires 0 <= k < dim.
Hypervector permute(const Hypervector& a, std::size_t k, Shift mode);
// Writes permute(a, k, mode) into out, which must have a.dim().
void permute_into(const Hypervector& a, std::size_t k, Shift mode, Hypervector& out);

std::size_t popcount(const Hypervector& a) noexcept;
std::size_t hamming(const Hypervector& a, const Hypervector& b);
// popcount(a AND b)
std::size_t dot(const Hypervector& a, const Hypervector& b);
// popcount(NOT a AND NOT b), without materializing the complements.
std::size_t dot_complement(const Hypervector& a, const Hypervector& b);

// Bundling counter. Counts are stored bit-sliced: plane b holds bit b of every
// component's tally, so adding a vector costs O(words * log(total)) word ops.
class Accumulator {
 public:
  explicit Accumulator(std::size_t dim);

  void add(const Hypervector& v);
  // Component j is 1 iff count(j) > threshold. Throws InvalidState when
  // nothing has been added and InvalidArgument on a negative threshold.
  [[nodiscard]] Hypervector binarize(double threshold) const;

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] std::size_t total_added() const noexcept { return total_; }
  [[nodiscard]] std::uint64_t count(std::size_t j) const;
  [[nodiscard]] std::vector<std::uint64_t> counts() const;
  void clear() noexcept;

 private:
  std::size_t dim_;
  std::size_t words_;
  std::uint64_t total_ = 0;
  // planes_[b * words_ + w]
  std::vector<Hypervector::word_type> planes_;
  std::size_t plane_count_ = 0;
};

// Component-wise majority of an odd number of equal-dim vectors.
Hypervector majority(std::span<const Hypervector> inputs);

// Dimension header (u32 LE) followed by ceil(dim/8) bytes, bit j in byte
// j / 8 at position j % 8.
void append_serialized(const Hypervector& v, std::vector<std::uint8_t>& out);
// Parses one vector at offset, advancing it. Throws InvalidArgument on
// truncated input or set padding bits.
Hypervector parse_serialized(std::span<const std::uint8_t> in, std::size_t& offset);

}  // namespace imhdc
