#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "imhdc/encoder.hpp"
#include "imhdc/hypervector.hpp"
#include "imhdc/item_memory.hpp"

namespace imhdc {

// dotp:  Q . P_i
// invhamm: Q . P_i + NOT Q . NOT P_i = d - hamming(Q, P_i)
enum class Metric { dotp, invhamm };

std::string_view to_string(Metric metric);
Metric parse_metric(std::string_view text);

class AssociativeMemory {
 public:
  AssociativeMemory(std::vector<std::string> labels, std::vector<Hypervector> prototypes,
                    bool store_complements = false);

  [[nodiscard]] std::size_t classes() const noexcept { return prototypes_.size(); }
  [[nodiscard]] std::size_t dim() const noexcept { return prototypes_.front().dim(); }
  [[nodiscard]] const std::vector<std::string>& labels() const noexcept { return labels_; }
  [[nodiscard]] const std::string& label(std::size_t i) const { return labels_.at(i); }
  [[nodiscard]] const std::vector<Hypervector>& prototypes() const noexcept { return prototypes_; }
  [[nodiscard]] const Hypervector& prototype(std::size_t i) const { return prototypes_.at(i); }
  [[nodiscard]] bool has_complements() const noexcept { return !complements_.empty(); }
  [[nodiscard]] const std::vector<Hypervector>& complements() const noexcept { return complements_; }

  [[nodiscard]] std::vector<std::int64_t> similarity(const Hypervector& query, Metric metric) const;
  // Argmax of similarity; ties go to the lowest class index.
  [[nodiscard]] std::size_t classify(const Hypervector& query, Metric metric) const;

  friend bool operator==(const AssociativeMemory&, const AssociativeMemory&) = default;

 private:
  std::vector<std::string> labels_;
  std::vector<Hypervector> prototypes_;
  std::vector<Hypervector> complements_;
};

// Lowest index among the maxima.
std::size_t argmax_lowest(std::span<const std::int64_t> values);

// Single-pass trainer: every n-gram of every sequence added to a class goes
// into that class's accumulator; the prototype is the bundle binarized at
// cfg.threshold(l) with l the class's total n-gram count.
class Trainer {
 public:
  Trainer(std::vector<std::string> labels, std::size_t dim, EncoderConfig cfg);

  void add_symbols(std::size_t cls, std::span<const std::uint8_t> symbols,
                   const NgramEncoder& encoder);
  void add_items(std::size_t cls, std::span<const Hypervector> items);

  [[nodiscard]] std::uint64_t ngram_count(std::size_t cls) const { return ngrams_.at(cls); }
  // Throws TrainingError if any class received no n-gram.
  [[nodiscard]] AssociativeMemory finish(bool store_complements = false) const;

 private:
  std::vector<std::string> labels_;
  EncoderConfig cfg_;
  std::vector<Accumulator> accumulators_;
  std::vector<std::uint64_t> ngrams_;
};

struct LabeledSequence {
  std::string label;
  std::vector<std::uint8_t> symbols;
};

// Groups sequences by label (classes in the given order), merges each class's
// text in input order and encodes one prototype per class.
AssociativeMemory train(std::span<const std::string> classes,
                        std::span<const LabeledSequence> sequences, const ItemMemory& im,
                        const EncoderConfig& cfg, bool store_complements = false);

}  // namespace imhdc
