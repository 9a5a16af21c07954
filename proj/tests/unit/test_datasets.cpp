#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "imhdc/datasets.hpp"
#include "imhdc/errors.hpp"

namespace fs = std::filesystem;
using imhdc::preprocess_text;
using imhdc::symbols_to_string;

namespace {

std::string clean(std::string_view raw) { return symbols_to_string(preprocess_text(raw)); }

class TempDir {
 public:
  explicit TempDir(const std::string& name)
      : path_(fs::temp_directory_path() / ("imhdc_test_" + name)) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  [[nodiscard]] const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

void write(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p) << text;
}

std::string emg_rows(std::size_t rows, int label_every = 0) {
  std::ostringstream os;
  os << "ch1,ch2,ch3,ch4,label\n";
  for (std::size_t r = 0; r < rows; ++r) {
    const int label = label_every == 0 ? 1 : 1 + static_cast<int>(r / label_every) % 5;
    os << r % 22 << ',' << (r + 3) % 22 << ",0,21," << label << '\n';
  }
  return os.str();
}

}  // namespace

TEST(Preprocess, RuleExamples) {
  EXPECT_EQ(clean("Hello, World!"), "hello world");
  EXPECT_EQ(clean("ABC"), "abc");
  EXPECT_EQ(clean(""), "");
  EXPECT_EQ(clean("  a1b\n\tc  "), "a b c");
  EXPECT_EQ(clean("caf\xc3\xa9 ok"), "caf ok");
}

TEST(Preprocess, Idempotent) {
  for (std::string_view raw : {"Hello,   World!", " x--y ", "Gr\xc3\xbc\xc3\x9f" "e 42 z"}) {
    const auto once = clean(raw);
    EXPECT_EQ(clean(once), once);
  }
}

TEST(Preprocess, SymbolRangeAndNoDoubleSpaces) {
  std::string raw;
  for (int c = 0; c < 256; ++c) raw += static_cast<char>(c);
  const auto symbols = preprocess_text(raw);
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    ASSERT_LE(symbols[i], 26);
    if (i > 0) ASSERT_FALSE(symbols[i] == imhdc::kWhitespace && symbols[i - 1] == imhdc::kWhitespace);
  }
  EXPECT_EQ(symbols_to_string(symbols), "abcdefghijklmnopqrstuvwxyz abcdefghijklmnopqrstuvwxyz");
}

TEST(Preprocess, News) {
  EXPECT_EQ(symbols_to_string(imhdc::preprocess_news("he is at a big house", {})), "big house");
  const imhdc::StopWords stop{"the"};
  EXPECT_EQ(symbols_to_string(imhdc::preprocess_news("the cat", stop)), "cat");
  EXPECT_TRUE(imhdc::preprocess_news("ox", {}).empty());
  EXPECT_TRUE(imhdc::default_stop_words().contains("the"));
}

TEST(Manifest, ResolvesRelativePathsAndSkipsComments) {
  TempDir dir("manifest");
  write(dir.path() / "train/en.txt", "x\n");
  write(dir.path() / "fr.txt", "x\n");
  const auto abs = fs::absolute(dir.path() / "fr.txt");
  write(dir.path() / "m.tsv", "# comment\nen\ttrain/en.txt\n\nfr\t" + abs.string() + "\n");
  const auto entries = imhdc::read_manifest(dir.path() / "m.tsv");
  ASSERT_EQ(entries.size(), 2U);
  EXPECT_EQ(entries[0].label, "en");
  EXPECT_EQ(entries[0].path, dir.path() / "train/en.txt");
  EXPECT_EQ(entries[1].path, abs);
  write(dir.path() / "gone.tsv", "de\tmissing.txt\n");
  EXPECT_THROW((void)imhdc::read_manifest(dir.path() / "gone.tsv"), imhdc::IngestError);
}

TEST(Manifest, MissingOrEmptyIsAnIngestError) {
  TempDir dir("manifest_empty");
  EXPECT_THROW((void)imhdc::read_manifest(dir.path() / "none.tsv"), imhdc::IngestError);
  write(dir.path() / "empty.tsv", "# nothing\n");
  EXPECT_THROW((void)imhdc::read_manifest(dir.path() / "empty.tsv"), imhdc::IngestError);
}

TEST(LoadLanguage, MergesTrainAndSplitsTestLines) {
  TempDir dir("lang");
  write(dir.path() / "train/en.txt", "The cat.\nA dog!\n");
  write(dir.path() / "train/de.txt", "Der Hund.\n");
  write(dir.path() / "test/en.txt", "one line\n\n!!!\nsecond line\n");
  write(dir.path() / "test/de.txt", "eine zeile\n");
  write(dir.path() / "train.tsv", "en\ttrain/en.txt\nde\ttrain/de.txt\n");
  write(dir.path() / "test.tsv", "en\ttest/en.txt\nde\ttest/de.txt\n");
  const auto data = imhdc::load_language(dir.path() / "train.tsv", dir.path() / "test.tsv");
  EXPECT_EQ(data.classes, (std::vector<std::string>{"en", "de"}));
  ASSERT_EQ(data.train.size(), 2U);
  EXPECT_EQ(symbols_to_string(data.train[0].symbols), "the cat a dog");
  ASSERT_EQ(data.test.size(), 3U);
  EXPECT_EQ(symbols_to_string(data.test[1].symbols), "second line");
  EXPECT_EQ(data.test[2].label, "de");
  EXPECT_EQ(data.skipped_empty, 1U);
}

TEST(LoadLanguage, MissingFileNamesThePath) {
  TempDir dir("lang_missing");
  write(dir.path() / "train.tsv", "en\tnope.txt\n");
  write(dir.path() / "test.tsv", "en\tnope.txt\n");
  try {
    (void)imhdc::load_language(dir.path() / "train.tsv", dir.path() / "test.tsv");
    FAIL() << "expected IngestError";
  } catch (const imhdc::IngestError& e) {
    EXPECT_NE(std::string(e.what()).find("nope.txt"), std::string::npos);
  }
}

TEST(Emg, DownsamplingCount) {
  const auto data = imhdc::parse_emg(emg_rows(2100), 175, 5, 0.5);
  EXPECT_EQ(data.raw_rows, 2100U);
  EXPECT_EQ(data.samples, 12U);
}

TEST(Emg, PaperScaleSplit) {
  const auto data = imhdc::parse_emg(emg_rows(5180 * 175, 175 * 40));
  EXPECT_EQ(data.samples, 5180U);
  EXPECT_EQ(data.queries.size(), 780U);
  std::size_t train_samples = 0;
  for (const auto& r : data.train) train_samples += r.samples.size();
  EXPECT_LE(train_samples, 1280U);
}

TEST(Emg, WindowLabels) {
  EXPECT_EQ(imhdc::window_label(std::vector{3, 3, 3, 3, 3}), 3);
  EXPECT_EQ(imhdc::window_label(std::vector{3, 3, 4, 4, 4}), 4);
  EXPECT_EQ(imhdc::window_label(std::vector{5, 5, 2, 2}), 2);
}

TEST(Emg, Errors) {
  EXPECT_THROW((void)imhdc::parse_emg(emg_rows(700), 175, 5), imhdc::IngestError);
  EXPECT_THROW((void)imhdc::parse_emg("1,2,3,4,1\n1,2,3,22,1\n", 1, 1, 0.5), imhdc::IngestError);
  EXPECT_THROW((void)imhdc::parse_emg("1,2,3,1\n", 1, 1, 0.5), imhdc::IngestError);
  EXPECT_THROW((void)imhdc::load_emg("/no/such/file.csv"), imhdc::IngestError);
}

TEST(Emg, LevelsInRange) {
  const auto csv = imhdc::synth_emg_csv({});
  const auto data = imhdc::parse_emg(csv);
  EXPECT_EQ(data.classes, (std::vector<int>{1, 2, 3, 4, 5}));
  for (const auto& r : data.queries) {
    for (const auto& s : r.samples) {
      for (auto level : s) ASSERT_LT(level, imhdc::kEmgLevels);
    }
  }
}

TEST(Synth, SeededAndShaped) {
  imhdc::SynthSpec spec;
  spec.classes = 4;
  spec.train_length = 3000;
  spec.test_per_class = 5;
  const auto a = imhdc::synth_corpus(spec);
  const auto b = imhdc::synth_corpus(spec);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.test, b.test);
  EXPECT_EQ(a.classes.size(), 4U);
  EXPECT_EQ(a.train.size(), 4U);
  EXPECT_EQ(a.test.size(), 20U);
  EXPECT_EQ(a.test[0].label, a.classes[0]);
  EXPECT_EQ(a.test[1].label, a.classes[1]);
  spec.seed = 2;
  EXPECT_NE(imhdc::synth_corpus(spec).train, a.train);
}

TEST(Synth, DisjointAlphabetsAtZeroMixing) {
  imhdc::SynthSpec spec;
  spec.classes = 3;
  spec.train_length = 2000;
  const auto data = imhdc::synth_corpus(spec);
  std::vector<std::set<std::uint8_t>> letters(3);
  for (std::size_t c = 0; c < 3; ++c) {
    for (auto s : data.train[c].symbols) {
      if (s != imhdc::kWhitespace) letters[c].insert(s);
    }
  }
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) {
      for (auto s : letters[i]) EXPECT_FALSE(letters[j].contains(s));
    }
  }
}

TEST(Synth, Errors) {
  imhdc::SynthSpec spec;
  spec.classes = 2;
  spec.train_length = 0;
  EXPECT_THROW((void)imhdc::synth_corpus(spec), imhdc::IngestError);
  spec.train_length = 10;
  spec.classes = 1;
  EXPECT_THROW((void)imhdc::synth_corpus(spec), imhdc::IngestError);
}

TEST(Synth, CorpusRoundTripsThroughFiles) {
  TempDir dir("synth_files");
  imhdc::SynthSpec spec;
  spec.classes = 3;
  spec.train_length = 500;
  spec.test_per_class = 4;
  const auto data = imhdc::synth_corpus(spec);
  imhdc::write_text_corpus(data, dir.path());
  const auto back = imhdc::load_language(dir.path() / "train.tsv", dir.path() / "test.tsv");
  EXPECT_EQ(back.classes, data.classes);
  EXPECT_EQ(back.train, data.train);
  // Files are per class, so test records come back grouped by class.
  EXPECT_EQ(back.test.size(), data.test.size());
}
