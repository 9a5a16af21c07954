#pragma once

// Digital reference n-gram encoders and sequence bundling.
//
// For an n-gram (B[1], ..., B[n]) with permutation rho:
//   exact        G = B[1] xnor rho(B[2]) xnor ... xnor rho^{n-1}(B[n])
//   all_minterm  G = OR_j AND_k rho^{k-1}(L_{k,j}(B[k])),  j < 2^{n-1}
//   two_minterm  G = AND_k rho^{k-1}(B[k])  OR  AND_k rho^{k-1}(NOT B[k])
// where L_{k,j} selects B[k] when Z(k, j) = floor((2j + 2^{k-1}) / 2^k) is
// even and its complement when odd. Under circular permutation the
// all-minterm expansion is bit-identical to the XNOR chain.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "imhdc/hypervector.hpp"
#include "imhdc/item_memory.hpp"

namespace imhdc {

enum class EncoderKind { exact, all_minterm, two_minterm };
enum class PermutationMode { circular, plain_shift };

std::string_view to_string(EncoderKind kind);
std::string_view to_string(PermutationMode mode);
EncoderKind parse_encoder_kind(std::string_view text);
PermutationMode parse_permutation_mode(std::string_view text);

// Largest n accepted by the all-minterm expansion.
inline constexpr std::size_t kMaxMintermN = 20;

struct EncoderConfig {
  std::size_t n = 4;
  EncoderKind kind = EncoderKind::exact;
  PermutationMode permutation = PermutationMode::circular;

  // k in the bundling threshold: 2^{n-1} for exact and all-minterm, 2 for
  // the two-minterm approximation.
  [[nodiscard]] std::uint64_t minterm_count() const;
  // l * k / 2^n, i.e. l / 2^{n - log2 k}.
  [[nodiscard]] double threshold(std::uint64_t ngram_count) const;
  void validate() const;

  friend bool operator==(const EncoderConfig&, const EncoderConfig&) = default;
};

[[nodiscard]] constexpr Shift shift_for(PermutationMode mode) noexcept {
  return mode == PermutationMode::circular ? Shift::circular : Shift::plain_right;
}

Hypervector ngram_exact(std::span<const Hypervector> basis,
                        PermutationMode mode = PermutationMode::circular);

// Minterm selector for an n-gram: 1 <= k <= n, 0 <= j < 2^{n-1}.
std::uint64_t z_index(std::size_t k, std::uint64_t j, std::size_t n);
// b when z_index(k, j, n) is even, NOT b when odd.
Hypervector l_operator(const Hypervector& b, std::size_t k, std::uint64_t j, std::size_t n);

Hypervector ngram_all_minterm(std::span<const Hypervector> basis,
                              PermutationMode mode = PermutationMode::circular);
Hypervector ngram_two_minterm(std::span<const Hypervector> basis,
                              PermutationMode mode = PermutationMode::circular);

Hypervector ngram(std::span<const Hypervector> basis, const EncoderConfig& cfg);

// rho^k under the given mode. Circular powers wrap modulo dim; plain shifts
// of k >= dim give the zero vector.
Hypervector permute_power(const Hypervector& b, std::size_t k, PermutationMode mode);

// N-gram encoder over a fixed item memory. Holds rho^{k}(B_s) and
// rho^{k}(NOT B_s) for every symbol s and k < n so that each window costs
// only word-wise AND/OR/XNOR.
class NgramEncoder {
 public:
  NgramEncoder(const ItemMemory& im, EncoderConfig cfg);

  [[nodiscard]] const EncoderConfig& config() const noexcept { return cfg_; }
  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }

  // window.size() must equal n; indices are item-memory rows.
  [[nodiscard]] Hypervector encode_window(std::span<const std::uint8_t> window) const;
  void encode_window_into(std::span<const std::uint8_t> window, Hypervector& out) const;
  // Adds every stride-1 window; returns the number of n-grams added.
  std::size_t accumulate(std::span<const std::uint8_t> symbols, Accumulator& acc) const;
  // Throws EncodeError when symbols.size() < n.
  [[nodiscard]] Hypervector encode_sequence(std::span<const std::uint8_t> symbols) const;

 private:
  [[nodiscard]] const Hypervector& direct(std::size_t k, std::uint8_t s) const;
  [[nodiscard]] const Hypervector& complement(std::size_t k, std::uint8_t s) const;

  EncoderConfig cfg_;
  std::size_t dim_;
  std::size_t symbols_;
  // [k * symbols_ + s]
  std::vector<Hypervector> direct_;
  std::vector<Hypervector> complement_;
};

// Bundles all stride-1 n-grams of symbols and binarizes at cfg.threshold(l).
Hypervector encode_sequence(std::span<const std::uint8_t> symbols, const ItemMemory& im,
                            const EncoderConfig& cfg);

// Same, over a sequence of per-position hypervectors rather than IM rows.
std::size_t accumulate_items(std::span<const Hypervector> items, const EncoderConfig& cfg,
                             Accumulator& acc);
Hypervector encode_items(std::span<const Hypervector> items, const EncoderConfig& cfg);

inline constexpr std::size_t kEmgChannels = 4;
using EmgSample = std::array<std::uint8_t, kEmgChannels>;

// Binds each channel vector with its level vector (XNOR) and takes the
// majority of the four bound vectors, with the tie vector deciding 2-2
// splits.
Hypervector spatial_encode_emg(const EmgSample& sample, const ItemMemory& channels,
                               const ContinuousItemMemory& levels, const Hypervector& tie);

}  // namespace imhdc
