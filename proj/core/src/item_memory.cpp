#include "imhdc/item_memory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "imhdc/errors.hpp"
#include "imhdc/rng.hpp"

namespace imhdc {

ItemMemory::ItemMemory(std::vector<std::string> symbols, std::vector<Hypervector> vectors,
                       std::uint64_t seed)
    : symbols_(std::move(symbols)), vectors_(std::move(vectors)), seed_(seed) {
  if (vectors_.empty()) throw InvalidArgument("item memory needs at least one symbol");
  if (symbols_.size() != vectors_.size()) {
    throw InvalidArgument("item memory: symbol and vector counts differ");
  }
  for (const auto& v : vectors_) {
    if (v.dim() != vectors_.front().dim()) {
      throw InvalidArgument("item memory: vectors must share one dimension");
    }
  }
}

std::size_t ItemMemory::index_of(std::string_view symbol) const {
  const auto it = std::find(symbols_.begin(), symbols_.end(), symbol);
  if (it == symbols_.end()) {
    throw LookupError("symbol '" + std::string(symbol) + "' is not in the item memory");
  }
  return static_cast<std::size_t>(it - symbols_.begin());
}

const Hypervector& ItemMemory::lookup(std::string_view symbol) const {
  return vectors_[index_of(symbol)];
}

const Hypervector& ItemMemory::at(std::size_t index) const {
  if (index >= vectors_.size()) {
    throw LookupError("symbol index " + std::to_string(index) + " is not in the item memory");
  }
  return vectors_[index];
}

double quasiorthogonal_band(std::size_t dim, double sigmas) {
  return sigmas * std::sqrt(static_cast<double>(dim) / 4.0);
}

ItemMemory generate_im(std::vector<std::string> symbols, std::size_t dim, std::uint64_t seed) {
  if (symbols.empty()) throw InvalidArgument("generate_im: h must be >= 1");
  if (dim == 0) throw InvalidArgument("generate_im: d must be >= 1");
  if (std::set<std::string>(symbols.begin(), symbols.end()).size() != symbols.size()) {
    throw InvalidArgument("generate_im: duplicate symbol");
  }
  std::vector<Hypervector> vectors;
  vectors.reserve(symbols.size());
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    vectors.push_back(Hypervector::random(dim, rng::derive(seed, "item-memory", i)));
  }
  const double half = static_cast<double>(dim) / 2.0;
  const double band = quasiorthogonal_band(dim);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    for (std::size_t j = i + 1; j < vectors.size(); ++j) {
      const auto dist = static_cast<double>(hamming(vectors[i], vectors[j]));
      if (std::abs(dist - half) > band) {
        throw InvariantBreach("generate_im: symbols " + std::to_string(i) + " and " +
                              std::to_string(j) + " are not quasiorthogonal");
      }
    }
  }
  return ItemMemory(std::move(symbols), std::move(vectors), seed);
}

ItemMemory generate_im(std::size_t h, std::size_t dim, std::uint64_t seed) {
  std::vector<std::string> symbols;
  symbols.reserve(h);
  for (std::size_t i = 0; i < h; ++i) symbols.push_back(std::to_string(i));
  return generate_im(std::move(symbols), dim, seed);
}

ContinuousItemMemory::ContinuousItemMemory(std::vector<Hypervector> levels, std::uint64_t seed)
    : levels_(std::move(levels)), seed_(seed) {
  if (levels_.size() < 2) throw InvalidArgument("continuous item memory needs >= 2 levels");
  for (const auto& v : levels_) {
    if (v.dim() != levels_.front().dim()) {
      throw InvalidArgument("continuous item memory: levels must share one dimension");
    }
  }
}

const Hypervector& ContinuousItemMemory::level(std::size_t i) const {
  if (i >= levels_.size()) {
    throw InvalidArgument("level " + std::to_string(i) + " is out of range");
  }
  return levels_[i];
}

ContinuousItemMemory generate_cim(std::size_t m, std::size_t dim, std::uint64_t seed) {
  if (m < 2) throw InvalidArgument("generate_cim: m must be >= 2");
  const Hypervector low = Hypervector::random(dim, rng::derive(seed, "cim-low"));
  const Hypervector high = Hypervector::random(dim, rng::derive(seed, "cim-high"));

  std::vector<std::size_t> differing;
  for (std::size_t j = 0; j < dim; ++j) {
    if (low.get(j) != high.get(j)) differing.push_back(j);
  }
  // Fisher-Yates with the library generator keeps the flip order portable.
  rng::Stream stream(rng::derive(seed, "cim-order"));
  for (std::size_t i = differing.size(); i > 1; --i) {
    std::swap(differing[i - 1], differing[stream.below(i)]);
  }

  std::vector<Hypervector> levels;
  levels.reserve(m);
  Hypervector current = low;
  std::size_t flipped = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t target = i * differing.size() / (m - 1);
    for (; flipped < target; ++flipped) {
      const std::size_t j = differing[flipped];
      current.set(j, !current.get(j));
    }
    levels.push_back(current);
  }
  return ContinuousItemMemory(std::move(levels), seed);
}

}  // namespace imhdc
