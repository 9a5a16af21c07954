#include <gtest/gtest.h>

#include <vector>

#include "imhdc/assoc_memory.hpp"
#include "imhdc/errors.hpp"
#include "imhdc/item_memory.hpp"
#include "imhdc/rng.hpp"

using imhdc::AssociativeMemory;
using imhdc::EncoderConfig;
using imhdc::Hypervector;
using imhdc::Metric;

namespace {

Hypervector hv(const char* bits) { return Hypervector::from_string(bits); }

AssociativeMemory random_am(std::size_t classes, std::size_t d, std::uint64_t seed) {
  std::vector<std::string> labels;
  std::vector<Hypervector> protos;
  for (std::size_t i = 0; i < classes; ++i) {
    labels.push_back("k" + std::to_string(i));
    protos.push_back(Hypervector::random(d, imhdc::rng::derive(seed, "proto", i)));
  }
  return AssociativeMemory(labels, protos);
}

// Fixed-weight vector: exactly `ones` ones at seeded positions.
Hypervector fixed_weight(std::size_t d, std::size_t ones, std::uint64_t key) {
  std::vector<std::size_t> idx(d);
  for (std::size_t i = 0; i < d; ++i) idx[i] = i;
  imhdc::rng::Stream s(key);
  for (std::size_t i = d - 1; i > 0; --i) std::swap(idx[i], idx[s.below(i + 1)]);
  Hypervector v(d);
  for (std::size_t i = 0; i < ones; ++i) v.set(idx[i], true);
  return v;
}

}  // namespace

TEST(AssocMemory, HandEnumeratedSimilarity) {
  const AssociativeMemory am({"p"}, {hv("10101010")});
  const auto q = hv("11001010");
  EXPECT_EQ(am.similarity(q, Metric::dotp)[0], 3);
  EXPECT_EQ(am.similarity(q, Metric::invhamm)[0], 6);
}

TEST(AssocMemory, SelfQueryIsMaximal) {
  const auto am = random_am(8, 1000, 1);
  for (std::size_t i = 0; i < am.classes(); ++i) {
    EXPECT_EQ(am.similarity(am.prototype(i), Metric::invhamm)[i], 1000);
    EXPECT_EQ(am.classify(am.prototype(i), Metric::invhamm), i);
    EXPECT_EQ(am.classify(am.prototype(i), Metric::dotp), i);
  }
}

TEST(AssocMemory, ZeroQueryGivesZeroDot) {
  const auto am = random_am(5, 300, 2);
  for (auto s : am.similarity(Hypervector(300), Metric::dotp)) EXPECT_EQ(s, 0);
  EXPECT_EQ(am.classify(Hypervector(300), Metric::dotp), 0U);
}

TEST(AssocMemory, TiesGoToLowestIndex) {
  const auto p = Hypervector::random(64, 3);
  const AssociativeMemory am({"a", "b", "c"}, {~p, p, p});
  EXPECT_EQ(am.classify(p, Metric::dotp), 1U);
  const std::vector<std::int64_t> v{3, 7, 7, 1};
  EXPECT_EQ(imhdc::argmax_lowest(v), 1U);
}

TEST(AssocMemory, MetricIdentity) {
  for (int i = 0; i < 10000; ++i) {
    const std::size_t d = 1 + static_cast<std::size_t>(i % 300);
    const auto q = Hypervector::random(d, imhdc::rng::derive(i, "q"));
    const auto p = Hypervector::random(d, imhdc::rng::derive(i, "p"));
    const AssociativeMemory am({"x"}, {p});
    const auto dotp = am.similarity(q, Metric::dotp)[0];
    const auto inv = am.similarity(q, Metric::invhamm)[0];
    ASSERT_EQ(inv, static_cast<std::int64_t>(d) - static_cast<std::int64_t>(q.popcount()) -
                       static_cast<std::int64_t>(p.popcount()) + 2 * dotp);
  }
}

TEST(AssocMemory, EqualPopcountPrototypesAgreeAcrossMetrics) {
  std::vector<Hypervector> protos;
  std::vector<std::string> labels;
  for (int i = 0; i < 10; ++i) {
    protos.push_back(fixed_weight(2000, 700, imhdc::rng::derive(i, "fw")));
    labels.push_back(std::to_string(i));
  }
  const AssociativeMemory am(labels, protos);
  for (int t = 0; t < 500; ++t) {
    const auto q = Hypervector::random(2000, imhdc::rng::derive(t, "eq"));
    ASSERT_EQ(am.classify(q, Metric::dotp), am.classify(q, Metric::invhamm));
  }
}

TEST(AssocMemory, ComplementsAreStored) {
  std::vector<Hypervector> protos{Hypervector::random(70, 1), Hypervector::random(70, 2)};
  const AssociativeMemory am({"a", "b"}, protos, true);
  ASSERT_TRUE(am.has_complements());
  for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(am.complements()[i], ~am.prototype(i));
}

TEST(AssocMemory, RejectsBadConstruction) {
  EXPECT_THROW(AssociativeMemory({}, {}), imhdc::InvalidArgument);
  EXPECT_THROW(AssociativeMemory({"a"}, {Hypervector(3), Hypervector(3)}), imhdc::InvalidArgument);
  EXPECT_THROW(AssociativeMemory({"a", "b"}, {Hypervector(3), Hypervector(4)}),
               imhdc::InvalidArgument);
  const auto am = random_am(2, 10, 1);
  EXPECT_THROW((void)am.similarity(Hypervector(11), Metric::dotp), imhdc::InvalidArgument);
}

TEST(Training, SingleSequenceEqualsEncodeSequence) {
  const auto im = imhdc::generate_im(27, 1000, 1);
  const EncoderConfig cfg{4};
  std::vector<std::uint8_t> text;
  for (int i = 0; i < 200; ++i) text.push_back(static_cast<std::uint8_t>((i * 7) % 27));
  const std::vector<std::string> classes{"only"};
  const std::vector<imhdc::LabeledSequence> seqs{{"only", text}};
  const auto am = imhdc::train(classes, seqs, im, cfg);
  EXPECT_EQ(am.prototype(0), imhdc::encode_sequence(text, im, cfg));
}

TEST(Training, ClassTextIsMergedInOrder) {
  const auto im = imhdc::generate_im(27, 1000, 2);
  const EncoderConfig cfg{3};
  const std::vector<std::uint8_t> a{0, 1, 2, 3, 4};
  const std::vector<std::uint8_t> b{5, 6, 7, 8};
  std::vector<std::uint8_t> merged = a;
  merged.insert(merged.end(), b.begin(), b.end());
  const std::vector<std::string> classes{"x"};
  const std::vector<imhdc::LabeledSequence> seqs{{"x", a}, {"x", b}};
  EXPECT_EQ(imhdc::train(classes, seqs, im, cfg).prototype(0),
            imhdc::encode_sequence(merged, im, cfg));
}

TEST(Training, DisjointAlphabetsGiveUncorrelatedPrototypes) {
  const auto im = imhdc::generate_im(27, 10000, 3);
  const EncoderConfig cfg{4};
  imhdc::rng::Stream s(4);
  std::vector<std::uint8_t> t1;
  std::vector<std::uint8_t> t2;
  for (int i = 0; i < 3000; ++i) {
    t1.push_back(static_cast<std::uint8_t>(s.below(13)));
    t2.push_back(static_cast<std::uint8_t>(13 + s.below(13)));
  }
  const std::vector<std::string> classes{"lo", "hi"};
  const std::vector<imhdc::LabeledSequence> seqs{{"lo", t1}, {"hi", t2}};
  const auto am = imhdc::train(classes, seqs, im, cfg);
  const double p1 = static_cast<double>(am.prototype(0).popcount()) / 10000.0;
  const double p2 = static_cast<double>(am.prototype(1).popcount()) / 10000.0;
  EXPECT_GT(p1, 0.0);
  EXPECT_LT(p1, 1.0);
  const double overlap = static_cast<double>(imhdc::dot(am.prototype(0), am.prototype(1))) / 10000.0;
  EXPECT_NEAR(overlap, p1 * p2, 0.02);
  EXPECT_EQ(am, imhdc::train(classes, seqs, im, cfg));
}

TEST(Training, EmptyClassIsATrainingError) {
  const auto im = imhdc::generate_im(27, 100, 1);
  const std::vector<std::string> classes{"a", "b"};
  const std::vector<imhdc::LabeledSequence> seqs{{"a", {1, 2, 3, 4, 5}}};
  EXPECT_THROW((void)imhdc::train(classes, seqs, im, EncoderConfig{3}), imhdc::TrainingError);
  const std::vector<imhdc::LabeledSequence> bad{{"zzz", {1, 2, 3, 4}}};
  EXPECT_THROW((void)imhdc::train(classes, bad, im, EncoderConfig{3}), imhdc::TrainingError);
}
