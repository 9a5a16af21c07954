#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "imhdc/hypervector.hpp"

namespace imhdc {

// Fixed table of basis hypervectors, one per input symbol.
class ItemMemory {
 public:
  ItemMemory(std::vector<std::string> symbols, std::vector<Hypervector> vectors,
             std::uint64_t seed);

  [[nodiscard]] std::size_t size() const noexcept { return vectors_.size(); }
  [[nodiscard]] std::size_t dim() const noexcept { return vectors_.front().dim(); }
  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] const std::vector<std::string>& symbols() const noexcept { return symbols_; }
  [[nodiscard]] const std::vector<Hypervector>& vectors() const noexcept { return vectors_; }

  // Throws LookupError for symbols outside the table.
  [[nodiscard]] const Hypervector& lookup(std::string_view symbol) const;
  [[nodiscard]] std::size_t index_of(std::string_view symbol) const;
  [[nodiscard]] const Hypervector& at(std::size_t index) const;

  friend bool operator==(const ItemMemory&, const ItemMemory&) = default;

 private:
  std::vector<std::string> symbols_;
  std::vector<Hypervector> vectors_;
  std::uint64_t seed_;
};

// h i.i.d. random basis vectors; symbol i gets the vector keyed by
// (seed, "item-memory", i). Throws InvariantBreach if any pair falls outside
// dim/2 +- 7 sqrt(dim/4).
ItemMemory generate_im(std::vector<std::string> symbols, std::size_t dim, std::uint64_t seed);
// Symbols named "0", "1", ... "h-1".
ItemMemory generate_im(std::size_t h, std::size_t dim, std::uint64_t seed);

// Half-width of the pairwise-distance acceptance band for random vectors.
double quasiorthogonal_band(std::size_t dim, double sigmas = 7.0);

// Level-coded hypervectors. Level 0 and level m-1 are independent random
// endpoints; level i carries the first floor(i * D / (m - 1)) of the D
// differing components (in a seeded shuffled order) flipped from the first
// endpoint toward the second, so distances grow linearly with level gap.
class ContinuousItemMemory {
 public:
  ContinuousItemMemory(std::vector<Hypervector> levels, std::uint64_t seed);

  [[nodiscard]] std::size_t levels() const noexcept { return levels_.size(); }
  [[nodiscard]] std::size_t dim() const noexcept { return levels_.front().dim(); }
  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] const Hypervector& level(std::size_t i) const;
  [[nodiscard]] const std::vector<Hypervector>& vectors() const noexcept { return levels_; }

  friend bool operator==(const ContinuousItemMemory&, const ContinuousItemMemory&) = default;

 private:
  std::vector<Hypervector> levels_;
  std::uint64_t seed_;
};

ContinuousItemMemory generate_cim(std::size_t m, std::size_t dim, std::uint64_t seed);

}  // namespace imhdc
