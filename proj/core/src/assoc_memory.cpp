#include "imhdc/assoc_memory.hpp"

#include <algorithm>

#include "imhdc/errors.hpp"

namespace imhdc {

std::string_view to_string(Metric metric) {
  return metric == Metric::dotp ? "dotp" : "invhamm";
}

Metric parse_metric(std::string_view text) {
  if (text == "dotp") return Metric::dotp;
  if (text == "invhamm" || text == "invHamm" || text == "inv_hamming") return Metric::invhamm;
  throw InvalidArgument("unknown metric '" + std::string(text) + "'");
}

AssociativeMemory::AssociativeMemory(std::vector<std::string> labels,
                                     std::vector<Hypervector> prototypes, bool store_complements)
    : labels_(std::move(labels)), prototypes_(std::move(prototypes)) {
  if (prototypes_.empty()) throw InvalidArgument("associative memory needs at least one class");
  if (labels_.size() != prototypes_.size()) {
    throw InvalidArgument("associative memory: label and prototype counts differ");
  }
  for (const auto& p : prototypes_) {
    if (p.dim() != prototypes_.front().dim()) {
      throw InvalidArgument("associative memory: prototypes must share one dimension");
    }
  }
  if (store_complements) {
    complements_.reserve(prototypes_.size());
    for (const auto& p : prototypes_) complements_.push_back(bit_not(p));
  }
}

std::vector<std::int64_t> AssociativeMemory::similarity(const Hypervector& query,
                                                        Metric metric) const {
  if (query.dim() != dim()) throw InvalidArgument("similarity: dimension mismatch");
  std::vector<std::int64_t> out;
  out.reserve(prototypes_.size());
  for (const auto& p : prototypes_) {
    auto s = static_cast<std::int64_t>(dot(query, p));
    if (metric == Metric::invhamm) s += static_cast<std::int64_t>(dot_complement(query, p));
    out.push_back(s);
  }
  return out;
}

std::size_t argmax_lowest(std::span<const std::int64_t> values) {
  if (values.empty()) throw InvalidArgument("argmax of an empty set");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

std::size_t AssociativeMemory::classify(const Hypervector& query, Metric metric) const {
  const auto sims = similarity(query, metric);
  return argmax_lowest(sims);
}

Trainer::Trainer(std::vector<std::string> labels, std::size_t dim, EncoderConfig cfg)
    : labels_(std::move(labels)), cfg_(cfg), ngrams_(labels_.size(), 0) {
  cfg_.validate();
  if (labels_.empty()) throw TrainingError("training needs at least one class");
  accumulators_.reserve(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) accumulators_.emplace_back(dim);
}

void Trainer::add_symbols(std::size_t cls, std::span<const std::uint8_t> symbols,
                          const NgramEncoder& encoder) {
  if (!(encoder.config() == cfg_)) throw InvalidArgument("trainer/encoder configuration mismatch");
  ngrams_.at(cls) += encoder.accumulate(symbols, accumulators_.at(cls));
}

void Trainer::add_items(std::size_t cls, std::span<const Hypervector> items) {
  ngrams_.at(cls) += accumulate_items(items, cfg_, accumulators_.at(cls));
}

AssociativeMemory Trainer::finish(bool store_complements) const {
  std::vector<Hypervector> prototypes;
  prototypes.reserve(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (ngrams_[i] == 0) {
      throw TrainingError("class '" + labels_[i] + "' has no training n-grams");
    }
    prototypes.push_back(accumulators_[i].binarize(cfg_.threshold(ngrams_[i])));
  }
  return AssociativeMemory(labels_, std::move(prototypes), store_complements);
}

AssociativeMemory train(std::span<const std::string> classes,
                        std::span<const LabeledSequence> sequences, const ItemMemory& im,
                        const EncoderConfig& cfg, bool store_complements) {
  std::vector<std::vector<std::uint8_t>> merged(classes.size());
  for (const auto& seq : sequences) {
    const auto it = std::find(classes.begin(), classes.end(), seq.label);
    if (it == classes.end()) throw TrainingError("sequence has unknown label '" + seq.label + "'");
    auto& text = merged[static_cast<std::size_t>(it - classes.begin())];
    text.insert(text.end(), seq.symbols.begin(), seq.symbols.end());
  }
  const NgramEncoder encoder(im, cfg);
  Trainer trainer(std::vector<std::string>(classes.begin(), classes.end()), im.dim(), cfg);
  for (std::size_t i = 0; i < classes.size(); ++i) trainer.add_symbols(i, merged[i], encoder);
  return trainer.finish(store_complements);
}

}  // namespace imhdc
