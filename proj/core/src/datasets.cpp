#include "imhdc/datasets.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "imhdc/errors.hpp"
#include "imhdc/rng.hpp"

namespace imhdc {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find('\n', start);
    const std::size_t stop = end == std::string_view::npos ? text.size() : end;
    std::string_view line = text.substr(start, stop - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return lines;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

using Preprocessor = std::vector<std::uint8_t> (*)(std::string_view, const StopWords&);

std::vector<std::uint8_t> text_rule(std::string_view raw, const StopWords&) {
  return preprocess_text(raw);
}

std::vector<std::uint8_t> news_rule(std::string_view raw, const StopWords& stop) {
  return preprocess_news(raw, stop);
}

TextDataset load_text_task(const fs::path& train_manifest, const fs::path& test_manifest,
                           Preprocessor rule, const StopWords& stop) {
  TextDataset data;
  const auto train_entries = read_manifest(train_manifest);
  std::map<std::string, std::size_t> class_index;
  for (const auto& e : train_entries) {
    if (class_index.emplace(e.label, data.classes.size()).second) {
      data.classes.push_back(e.label);
      data.train.push_back(TextRecord{e.label, {}});
    }
    auto symbols = rule(read_file(e.path), stop);
    if (symbols.empty()) {
      ++data.skipped_empty;
      continue;
    }
    auto& merged = data.train[class_index.at(e.label)].symbols;
    if (!merged.empty()) merged.push_back(kWhitespace);
    merged.insert(merged.end(), symbols.begin(), symbols.end());
  }
  for (const auto& rec : data.train) {
    if (rec.symbols.empty()) throw IngestError("class '" + rec.label + "' has no training text");
  }

  for (const auto& e : read_manifest(test_manifest)) {
    if (!class_index.contains(e.label)) {
      throw IngestError("test label '" + e.label + "' does not appear in the training manifest");
    }
    const std::string text = read_file(e.path);
    for (std::string_view line : split_lines(text)) {
      auto symbols = rule(line, stop);
      if (symbols.empty()) {
        if (!trim(line).empty()) ++data.skipped_empty;
        continue;
      }
      data.test.push_back(TextRecord{e.label, std::move(symbols)});
    }
  }
  return data;
}

}  // namespace

std::vector<std::string> text_symbol_names() {
  std::vector<std::string> names;
  names.reserve(kTextSymbols);
  for (char c = 'a'; c <= 'z'; ++c) names.emplace_back(1, c);
  names.emplace_back(" ");
  return names;
}

std::vector<std::uint8_t> preprocess_text(std::string_view raw) {
  std::vector<std::uint8_t> out;
  out.reserve(raw.size());
  for (char ch : raw) {
    const auto c = static_cast<unsigned char>(ch);
    std::uint8_t sym = kWhitespace;
    if (c >= 'a' && c <= 'z') sym = static_cast<std::uint8_t>(c - 'a');
    if (c >= 'A' && c <= 'Z') sym = static_cast<std::uint8_t>(c - 'A');
    if (sym == kWhitespace && (out.empty() || out.back() == kWhitespace)) continue;
    out.push_back(sym);
  }
  if (!out.empty() && out.back() == kWhitespace) out.pop_back();
  return out;
}

std::string symbols_to_string(std::span<const std::uint8_t> symbols) {
  std::string s;
  s.reserve(symbols.size());
  for (auto sym : symbols) {
    if (sym > kWhitespace) throw InvalidArgument("symbol index out of range");
    s.push_back(sym == kWhitespace ? ' ' : static_cast<char>('a' + sym));
  }
  return s;
}

const StopWords& default_stop_words() {
  // Frequent English function words of three or more letters; shorter words
  // are dropped by the length rule anyway.
  static const StopWords words{
      "about", "after", "all",   "also",  "and",   "any",   "are",   "been",  "but",
      "can",   "could", "for",   "from",  "had",   "has",   "have",  "her",   "his",
      "into",  "its",   "may",   "more",  "new",   "not",   "one",   "other", "our",
      "out",   "over",  "said",  "some",  "such",  "than",  "that",  "the",   "their",
      "them",  "there", "these", "they",  "this",  "was",   "were",  "what",  "when",
      "which", "who",   "will",  "with",  "would", "you"};
  return words;
}

std::vector<std::uint8_t> preprocess_news(std::string_view raw, const StopWords& stop_words) {
  const auto symbols = preprocess_text(raw);
  std::vector<std::uint8_t> out;
  out.reserve(symbols.size());
  std::size_t start = 0;
  while (start < symbols.size()) {
    std::size_t end = start;
    while (end < symbols.size() && symbols[end] != kWhitespace) ++end;
    const std::span<const std::uint8_t> word(symbols.data() + start, end - start);
    if (word.size() >= 3 && !stop_words.contains(symbols_to_string(word))) {
      if (!out.empty()) out.push_back(kWhitespace);
      out.insert(out.end(), word.begin(), word.end());
    }
    start = end + 1;
  }
  return out;
}

std::vector<ManifestEntry> read_manifest(const fs::path& manifest) {
  if (!fs::exists(manifest)) throw IngestError("manifest '" + manifest.string() + "' not found");
  const std::string text = read_file(manifest);
  const fs::path base = manifest.parent_path();
  std::vector<ManifestEntry> entries;
  std::size_t line_no = 0;
  for (std::string_view line : split_lines(text)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw IngestError(manifest.string() + ":" + std::to_string(line_no) +
                        ": expected 'label<TAB>path'");
    }
    const std::string_view label = trim(line.substr(0, tab));
    const fs::path path(std::string(trim(line.substr(tab + 1))));
    if (label.empty() || path.empty()) {
      throw IngestError(manifest.string() + ":" + std::to_string(line_no) + ": empty field");
    }
    entries.push_back(ManifestEntry{std::string(label), path.is_absolute() ? path : base / path});
  }
  if (entries.empty()) throw IngestError("manifest '" + manifest.string() + "' lists no files");
  for (const auto& e : entries) {
    if (!fs::exists(e.path)) throw IngestError("missing data file '" + e.path.string() + "'");
  }
  return entries;
}

TextDataset load_language(const fs::path& train_manifest, const fs::path& test_manifest) {
  return load_text_task(train_manifest, test_manifest, &text_rule, default_stop_words());
}

TextDataset load_news(const fs::path& train_manifest, const fs::path& test_manifest,
                      const StopWords& stop_words) {
  return load_text_task(train_manifest, test_manifest, &news_rule, stop_words);
}

int window_label(std::span<const int> labels) {
  if (labels.empty()) throw InvalidArgument("window_label of an empty window");
  std::map<int, std::size_t> votes;
  for (int l : labels) ++votes[l];
  int best = votes.begin()->first;
  std::size_t best_votes = 0;
  for (const auto& [label, count] : votes) {
    if (count > best_votes) {
      best = label;
      best_votes = count;
    }
  }
  return best;
}

EmgDataset parse_emg(std::string_view csv, std::size_t downsample, std::size_t n,
                     double train_fraction) {
  if (downsample == 0) throw InvalidArgument("downsample factor must be >= 1");
  if (n == 0) throw InvalidArgument("n must be >= 1");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw InvalidArgument("train fraction must be in (0, 1)");
  }
  struct Row {
    EmgSample levels;
    int label;
  };
  std::vector<Row> rows;
  std::size_t line_no = 0;
  for (std::string_view line : split_lines(csv)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    std::array<long, 5> fields{};
    std::size_t count = 0;
    bool numeric = true;
    std::size_t start = 0;
    while (start <= line.size()) {
      std::size_t end = line.find_first_of(",;\t", start);
      if (end == std::string_view::npos) end = line.size();
      const std::string_view field = trim(line.substr(start, end - start));
      long value = 0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
      if (ec != std::errc() || ptr != field.data() + field.size()) numeric = false;
      if (count < fields.size()) fields[count] = value;
      ++count;
      start = end + 1;
      if (end == line.size()) break;
    }
    if (!numeric) {
      if (rows.empty() && line_no == 1) continue;  // header
      throw IngestError("EMG line " + std::to_string(line_no) + " is not numeric");
    }
    if (count != 5) {
      throw IngestError("EMG line " + std::to_string(line_no) + " needs 5 columns (ch1..ch4,label)");
    }
    Row row{};
    for (std::size_t c = 0; c < kEmgChannels; ++c) {
      if (fields[c] < 0 || fields[c] >= static_cast<long>(kEmgLevels)) {
        throw IngestError("EMG line " + std::to_string(line_no) + ": level out of [0, 21]");
      }
      row.levels[c] = static_cast<std::uint8_t>(fields[c]);
    }
    row.label = static_cast<int>(fields[4]);
    rows.push_back(row);
  }

  EmgDataset data;
  data.raw_rows = rows.size();
  std::vector<Row> kept;
  for (std::size_t i = 0; i < rows.size() / downsample; ++i) kept.push_back(rows[i * downsample]);
  data.samples = kept.size();
  if (kept.size() < n) {
    throw IngestError("EMG recording has " + std::to_string(kept.size()) +
                      " samples after down-sampling; need at least " + std::to_string(n));
  }

  const auto train_end = static_cast<std::size_t>(
      std::llround(train_fraction * static_cast<double>(kept.size())));
  std::set<int> labels;
  for (std::size_t i = 0; i < train_end;) {
    std::size_t j = i;
    EmgRecord run{kept[i].label, {}};
    while (j < train_end && kept[j].label == run.label) run.samples.push_back(kept[j++].levels);
    labels.insert(run.label);
    if (run.samples.size() >= n) data.train.push_back(std::move(run));
    i = j;
  }
  for (std::size_t start = train_end; start + n <= kept.size(); start += n) {
    EmgRecord q;
    std::vector<int> window_labels;
    for (std::size_t k = start; k < start + n; ++k) {
      q.samples.push_back(kept[k].levels);
      window_labels.push_back(kept[k].label);
    }
    q.label = window_label(window_labels);
    labels.insert(q.label);
    data.queries.push_back(std::move(q));
  }
  data.classes.assign(labels.begin(), labels.end());
  return data;
}

EmgDataset load_emg(const fs::path& path, std::size_t downsample, std::size_t n,
                    double train_fraction) {
  if (!fs::exists(path)) throw IngestError("EMG file '" + path.string() + "' not found");
  return parse_emg(read_file(path), downsample, n, train_fraction);
}

namespace {

constexpr std::size_t kLetters = 26;
constexpr double kSpaceProbability = 0.18;
constexpr std::size_t kOverlapAlphabet = 10;

struct Chain {
  std::vector<std::uint8_t> alphabet;
  // Cumulative transition weights, [prev * alphabet.size() + i].
  std::vector<double> cumulative;

  std::uint8_t next(std::uint8_t prev, rng::Stream& stream) const {
    const std::size_t k = alphabet.size();
    const std::size_t row = prev % kLetters;
    const double* cdf = cumulative.data() + row * k;
    const double u = stream.uniform() * cdf[k - 1];
    const auto it = std::upper_bound(cdf, cdf + k, u);
    return alphabet[std::min<std::size_t>(static_cast<std::size_t>(it - cdf), k - 1)];
  }
};

Chain make_chain(std::vector<std::uint8_t> alphabet, std::uint64_t key) {
  Chain chain;
  chain.alphabet = std::move(alphabet);
  const std::size_t k = chain.alphabet.size();
  chain.cumulative.resize(kLetters * k);
  rng::Stream stream(key);
  for (std::size_t prev = 0; prev < kLetters; ++prev) {
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      total += std::exp(1.5 * stream.normal());
      chain.cumulative[prev * k + i] = total;
    }
  }
  return chain;
}

std::vector<std::uint8_t> generate_text(const Chain& own, const Chain& shared, double mixing,
                                        std::size_t length, rng::Stream& stream) {
  std::vector<std::uint8_t> out;
  out.reserve(length);
  std::uint8_t prev_letter = static_cast<std::uint8_t>(stream.below(kLetters));
  while (out.size() < length) {
    if (!out.empty() && out.back() != kWhitespace && out.size() + 1 < length &&
        stream.uniform() < kSpaceProbability) {
      out.push_back(kWhitespace);
      continue;
    }
    const Chain& chain = stream.uniform() < mixing ? shared : own;
    prev_letter = chain.next(prev_letter, stream);
    out.push_back(prev_letter);
  }
  return out;
}

}  // namespace

TextDataset synth_corpus(const SynthSpec& spec) {
  if (spec.classes < 2) throw IngestError("synthetic corpus needs at least 2 classes");
  if (spec.train_length == 0 || spec.test_length == 0) {
    throw IngestError("synthetic corpus length must be > 0");
  }
  if (spec.mixing < 0.0 || spec.mixing > 1.0) throw InvalidArgument("mixing must be in [0, 1]");

  std::vector<std::uint8_t> all(kLetters);
  for (std::size_t i = 0; i < kLetters; ++i) all[i] = static_cast<std::uint8_t>(i);
  const Chain shared = make_chain(all, rng::derive(spec.seed, "synth-shared-chain"));

  std::vector<Chain> chains;
  rng::Stream alphabet_stream(rng::derive(spec.seed, "synth-alphabets"));
  const bool disjoint = spec.classes * 2 <= kLetters;
  std::vector<std::uint8_t> order = all;
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[alphabet_stream.below(i)]);
  }
  for (std::size_t c = 0; c < spec.classes; ++c) {
    std::vector<std::uint8_t> alphabet;
    if (disjoint) {
      const std::size_t size = kLetters / spec.classes;
      alphabet.assign(order.begin() + static_cast<std::ptrdiff_t>(c * size),
                      order.begin() + static_cast<std::ptrdiff_t>((c + 1) * size));
    } else {
      std::vector<std::uint8_t> pool = all;
      for (std::size_t i = 0; i < kOverlapAlphabet; ++i) {
        std::swap(pool[i], pool[i + alphabet_stream.below(pool.size() - i)]);
      }
      alphabet.assign(pool.begin(), pool.begin() + kOverlapAlphabet);
    }
    std::sort(alphabet.begin(), alphabet.end());
    chains.push_back(make_chain(std::move(alphabet), rng::derive(spec.seed, "synth-chain", c)));
  }

  TextDataset data;
  const int width = spec.classes > 10 ? 2 : 1;
  for (std::size_t c = 0; c < spec.classes; ++c) {
    std::string label = std::to_string(c);
    label.insert(0, static_cast<std::size_t>(std::max(0, width - static_cast<int>(label.size()))), '0');
    data.classes.push_back("c" + label);
  }
  for (std::size_t c = 0; c < spec.classes; ++c) {
    rng::Stream stream(rng::derive(spec.seed, "synth-train", c));
    data.train.push_back(TextRecord{
        data.classes[c], generate_text(chains[c], shared, spec.mixing, spec.train_length, stream)});
  }
  for (std::size_t q = 0; q < spec.test_per_class; ++q) {
    for (std::size_t c = 0; c < spec.classes; ++c) {
      rng::Stream stream(rng::derive(spec.seed, "synth-test", q * spec.classes + c));
      const std::size_t length =
          std::max<std::size_t>(8, spec.test_length / 2 + stream.below(spec.test_length + 1));
      data.test.push_back(
          TextRecord{data.classes[c], generate_text(chains[c], shared, spec.mixing, length, stream)});
    }
  }
  return data;
}

void write_text_corpus(const TextDataset& data, const fs::path& dir) {
  fs::create_directories(dir / "train");
  fs::create_directories(dir / "test");
  std::ofstream train_manifest(dir / "train.tsv");
  std::ofstream test_manifest(dir / "test.tsv");
  if (!train_manifest || !test_manifest) {
    throw IngestError("cannot write manifests under '" + dir.string() + "'");
  }
  for (const auto& rec : data.train) {
    const fs::path rel = fs::path("train") / (rec.label + ".txt");
    std::ofstream out(dir / rel);
    out << symbols_to_string(rec.symbols) << '\n';
    train_manifest << rec.label << '\t' << rel.generic_string() << '\n';
  }
  for (const auto& label : data.classes) {
    const fs::path rel = fs::path("test") / (label + ".txt");
    std::ofstream out(dir / rel);
    for (const auto& rec : data.test) {
      if (rec.label == label) out << symbols_to_string(rec.symbols) << '\n';
    }
    test_manifest << label << '\t' << rel.generic_string() << '\n';
  }
}

std::string synth_emg_csv(const SynthEmgSpec& spec) {
  if (spec.classes < 2 || spec.hold_rows == 0) {
    throw InvalidArgument("synthetic EMG needs >= 2 classes and hold_rows > 0");
  }
  rng::Stream profile_stream(rng::derive(spec.seed, "synth-emg-profile"));
  std::vector<std::array<double, kEmgChannels>> means(spec.classes);
  for (auto& m : means) {
    for (auto& level : m) level = 2.0 + 17.0 * profile_stream.uniform();
  }
  rng::Stream stream(rng::derive(spec.seed, "synth-emg-samples"));
  std::ostringstream out;
  out << "ch1,ch2,ch3,ch4,label\n";
  std::size_t cls = 0;
  for (std::size_t r = 0; r < spec.raw_rows; ++r) {
    if (r % spec.hold_rows == 0) cls = stream.below(spec.classes);
    for (std::size_t c = 0; c < kEmgChannels; ++c) {
      const double v = means[cls][c] + spec.level_sigma * stream.normal();
      const long level = std::clamp<long>(std::lround(v), 0, static_cast<long>(kEmgLevels) - 1);
      out << level << ',';
    }
    out << (cls + 1) << '\n';
  }
  return out.str();
}

}  // namespace imhdc
