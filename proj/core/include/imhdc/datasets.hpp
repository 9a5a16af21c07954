#pragma once

// Ingestion for the language, news and EMG tasks plus seeded synthetic
// corpora.
//
// Text is reduced to 27 symbols: 'a'..'z' are 0..25 and whitespace is 26.
// Upper case folds to lower case; every other byte (digits, punctuation,
// newlines, UTF-8 sequences of accented letters) becomes whitespace; runs of
// whitespace collapse and leading/trailing whitespace is dropped.
//
// A manifest lists one "label<TAB>path" pair per line ('#' starts a comment);
// relative paths resolve against the manifest's directory.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "imhdc/encoder.hpp"

namespace imhdc {

inline constexpr std::size_t kTextSymbols = 27;
inline constexpr std::uint8_t kWhitespace = 26;
inline constexpr std::size_t kEmgLevels = 22;
// 1280 of 5180 down-sampled samples train; the remaining 3900 form 780 queries.
inline constexpr double kEmgTrainFraction = 1280.0 / 5180.0;

// "a", ..., "z", " "
std::vector<std::string> text_symbol_names();

struct TextRecord {
  std::string label;
  std::vector<std::uint8_t> symbols;

  friend bool operator==(const TextRecord&, const TextRecord&) = default;
};

struct EmgRecord {
  int label = 0;
  std::vector<EmgSample> samples;

  friend bool operator==(const EmgRecord&, const EmgRecord&) = default;
};

std::vector<std::uint8_t> preprocess_text(std::string_view raw);
std::string symbols_to_string(std::span<const std::uint8_t> symbols);

using StopWords = std::set<std::string, std::less<>>;
const StopWords& default_stop_words();

// preprocess_text, then drops words shorter than 3 letters and stop words.
std::vector<std::uint8_t> preprocess_news(std::string_view raw,
                                          const StopWords& stop_words = default_stop_words());

struct ManifestEntry {
  std::string label;
  std::filesystem::path path;
};

// Throws IngestError when the manifest is missing or lists nothing.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& manifest);

struct TextDataset {
  std::vector<std::string> classes;
  // One merged record per class, classes in manifest order.
  std::vector<TextRecord> train;
  // One record per non-empty line of the test files.
  std::vector<TextRecord> test;
  std::size_t skipped_empty = 0;
};

TextDataset load_language(const std::filesystem::path& train_manifest,
                          const std::filesystem::path& test_manifest);
TextDataset load_news(const std::filesystem::path& train_manifest,
                      const std::filesystem::path& test_manifest,
                      const StopWords& stop_words = default_stop_words());

struct EmgDataset {
  std::vector<int> classes;        // sorted labels present in the recording
  std::vector<EmgRecord> train;    // contiguous same-label runs of the training region
  std::vector<EmgRecord> queries;  // non-overlapping n-sample windows after it
  std::size_t raw_rows = 0;
  std::size_t samples = 0;         // after down-sampling
};

// Majority label of a window; ties go to the smallest label.
int window_label(std::span<const int> labels);

// Delimited text with columns ch1..ch4,label (header optional). Keeps every
// downsample-th row, trains on the first train_fraction of the kept samples
// and cuts the rest into n-sample queries.
EmgDataset load_emg(const std::filesystem::path& path, std::size_t downsample = 175,
                    std::size_t n = 5, double train_fraction = kEmgTrainFraction);
EmgDataset parse_emg(std::string_view csv, std::size_t downsample = 175, std::size_t n = 5,
                     double train_fraction = kEmgTrainFraction);

struct SynthSpec {
  std::size_t classes = 22;
  std::uint64_t seed = 1;
  std::size_t train_length = 20000;  // symbols per class
  std::size_t test_per_class = 50;
  std::size_t test_length = 120;     // mean query length in symbols
  // 0: each class draws letters from its own first-order chain over its own
  // alphabet; 1: every letter comes from one chain shared by all classes.
  double mixing = 0.0;

  friend bool operator==(const SynthSpec&, const SynthSpec&) = default;
};

// Per class, a seeded first-order letter-transition chain generates text;
// with probability `mixing` each letter is drawn from a shared chain instead.
// With classes <= 13 the class alphabets are disjoint; otherwise each class
// gets a random 10-letter alphabet. Queries interleave classes round-robin.
TextDataset synth_corpus(const SynthSpec& spec);

// Writes train/<label>.txt, test/<label>.txt (one query per line) and the
// manifests train.tsv and test.tsv under dir.
void write_text_corpus(const TextDataset& data, const std::filesystem::path& dir);

struct SynthEmgSpec {
  std::size_t classes = 5;
  std::uint64_t seed = 1;
  std::size_t raw_rows = 5180 * 175;
  std::size_t hold_rows = 175 * 40;  // raw rows per gesture block
  double level_sigma = 1.5;
};

// CSV text with header "ch1,ch2,ch3,ch4,label".
std::string synth_emg_csv(const SynthEmgSpec& spec);

}  // namespace imhdc
