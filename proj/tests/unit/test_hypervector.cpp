#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "imhdc/errors.hpp"
#include "imhdc/hypervector.hpp"
#include "imhdc/rng.hpp"
#include "naive_hv.hpp"

using imhdc::Accumulator;
using imhdc::Hypervector;
using imhdc::Shift;

namespace {

const std::vector<std::size_t> kDims{1, 63, 64, 65, 127, 129, 10000};

Hypervector hv(const char* bits) { return Hypervector::from_string(bits); }

}  // namespace

TEST(Hypervector, ZeroDimensionIsRejected) {
  EXPECT_THROW(Hypervector(0), imhdc::InvalidArgument);
  EXPECT_THROW(Hypervector::random(0, 1), imhdc::InvalidArgument);
}

TEST(Hypervector, RandomIsDeterministicPerSeed) {
  EXPECT_EQ(Hypervector::random(10000, 1), Hypervector::random(10000, 1));
  EXPECT_NE(Hypervector::random(10000, 1), Hypervector::random(10000, 2));
}

TEST(Hypervector, SingleComponentPopcount) {
  for (std::uint64_t seed = 0; seed < 32; ++seed) {
    EXPECT_LE(Hypervector::random(1, seed).popcount(), 1U);
  }
}

TEST(Hypervector, SeedPairsAreQuasiOrthogonal) {
  // Hamming(x, y) ~ Binomial(10000, 1/2): sigma = 50.
  for (std::uint64_t s = 0; s < 200; s += 2) {
    const auto d = imhdc::hamming(Hypervector::random(10000, s), Hypervector::random(10000, s + 1));
    EXPECT_NEAR(static_cast<double>(d), 5000.0, 250.0) << "seed " << s;
  }
}

TEST(Hypervector, TruthTables) {
  EXPECT_EQ(imhdc::xnor(hv("1010"), hv("1100")), hv("1001"));
  EXPECT_EQ(imhdc::bit_and(hv("1010"), hv("1100")), hv("1000"));
  EXPECT_EQ(imhdc::bit_or(hv("1010"), hv("1100")), hv("1110"));
  EXPECT_EQ(imhdc::bit_xor(hv("1010"), hv("1100")), hv("0110"));
  EXPECT_EQ(imhdc::bit_not(hv("1010")), hv("0101"));
}

TEST(Hypervector, IdentityCases) {
  const auto x = Hypervector::random(130, 7);
  EXPECT_EQ(imhdc::xnor(x, x), Hypervector::ones(130));
  EXPECT_EQ(imhdc::xnor(x, ~x), Hypervector::zeros(130));
  EXPECT_EQ(x & Hypervector::ones(130), x);
  EXPECT_EQ(x | ~x, Hypervector::ones(130));
}

TEST(Hypervector, DimensionMismatchThrows) {
  const Hypervector a(10);
  const Hypervector b(11);
  EXPECT_THROW((void)imhdc::xnor(a, b), imhdc::InvalidArgument);
  EXPECT_THROW((void)(a & b), imhdc::InvalidArgument);
  EXPECT_THROW((void)(a | b), imhdc::InvalidArgument);
  EXPECT_THROW((void)imhdc::hamming(a, b), imhdc::InvalidArgument);
  EXPECT_THROW((void)imhdc::dot(a, b), imhdc::InvalidArgument);
}

TEST(Hypervector, PermutationHandTraces) {
  EXPECT_EQ(imhdc::permute(hv("1000"), 1, Shift::circular), hv("0100"));
  EXPECT_EQ(imhdc::permute(hv("0001"), 1, Shift::circular), hv("1000"));
  EXPECT_EQ(imhdc::permute(hv("1001"), 1, Shift::plain_right), hv("0100"));
  EXPECT_EQ(imhdc::permute(hv("1001"), 1, Shift::plain_left), hv("0010"));
  const auto x = Hypervector::random(77, 3);
  for (Shift mode : {Shift::circular, Shift::plain_right, Shift::plain_left}) {
    EXPECT_EQ(imhdc::permute(x, 0, mode), x);
  }
  EXPECT_THROW((void)imhdc::permute(x, 77, Shift::circular), imhdc::InvalidArgument);
}

TEST(Hypervector, CircularInverse) {
  for (std::size_t d : kDims) {
    const auto x = Hypervector::random(d, d);
    for (std::size_t k : {std::size_t{1}, d / 3, d - 1}) {
      if (k == 0 || k >= d) continue;
      EXPECT_EQ(imhdc::permute(imhdc::permute(x, k, Shift::circular), d - k, Shift::circular), x);
    }
  }
}

TEST(Hypervector, MatchesNaiveReferenceAcrossWordBoundaries) {
  for (std::size_t d : kDims) {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      const auto a = Hypervector::random(d, 2 * seed);
      const auto b = Hypervector::random(d, 2 * seed + 1);
      const auto na = naive::from(a);
      const auto nb = naive::from(b);
      EXPECT_EQ(naive::from(imhdc::xnor(a, b)), naive::xnor(na, nb));
      EXPECT_EQ(naive::from(a & b), naive::land(na, nb));
      EXPECT_EQ(naive::from(a | b), naive::lor(na, nb));
      EXPECT_EQ(naive::from(a ^ b), naive::lxor(na, nb));
      EXPECT_EQ(naive::from(~a), naive::lnot(na));
      EXPECT_EQ(imhdc::popcount(a), naive::popcount(na));
      EXPECT_EQ(imhdc::hamming(a, b), naive::hamming(na, nb));
      EXPECT_EQ(imhdc::dot(a, b), naive::dot(na, nb));
      EXPECT_EQ(imhdc::dot_complement(a, b), naive::dot(naive::lnot(na), naive::lnot(nb)));
      for (std::size_t k : {std::size_t{0}, std::size_t{1}, std::size_t{63}, std::size_t{64},
                            std::size_t{65}, d / 2, d - 1}) {
        if (k >= d) continue;
        EXPECT_EQ(naive::from(imhdc::permute(a, k, Shift::circular)), naive::rotate(na, k))
            << "d=" << d << " k=" << k;
        EXPECT_EQ(naive::from(imhdc::permute(a, k, Shift::plain_right)),
                  naive::shift_right(na, k));
        EXPECT_EQ(naive::from(imhdc::permute(a, k, Shift::plain_left)), naive::shift_left(na, k));
      }
    }
  }
}

TEST(Hypervector, PaddingStaysCanonicalUnderFuzzedOps) {
  imhdc::rng::Stream pick(imhdc::rng::derive(5, "fuzz"));
  for (std::size_t d : kDims) {
    auto x = Hypervector::random(d, 11);
    auto y = Hypervector::random(d, 12);
    for (int step = 0; step < 200; ++step) {
      switch (pick.below(7)) {
        case 0: x = imhdc::xnor(x, y); break;
        case 1: x = ~x; break;
        case 2: x = imhdc::permute(x, pick.below(d), Shift::circular); break;
        case 3: x = imhdc::permute(x, pick.below(d), Shift::plain_left); break;
        case 4: x.flip(); break;
        case 5: y = x | y; break;
        default: y = imhdc::permute(y, pick.below(d), Shift::plain_right); break;
      }
      ASSERT_TRUE(x.padding_is_zero());
      ASSERT_TRUE(y.padding_is_zero());
      ASSERT_EQ(x.dim(), d);
    }
  }
}

TEST(Hypervector, XnorIsAssociativeAndCommutative) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto a = Hypervector::random(1001, 3 * s);
    const auto b = Hypervector::random(1001, 3 * s + 1);
    const auto c = Hypervector::random(1001, 3 * s + 2);
    EXPECT_EQ(imhdc::xnor(a, b), imhdc::xnor(b, a));
    EXPECT_EQ(imhdc::xnor(imhdc::xnor(a, b), c), imhdc::xnor(a, imhdc::xnor(b, c)));
  }
}

TEST(Hypervector, InverseHammingDecomposition) {
  for (std::size_t d : {1, 63, 64, 65, 10000}) {
    const int pairs = d == 10000 ? 2000 : 10000;
    for (int i = 0; i < pairs; ++i) {
      const auto a = Hypervector::random(d, imhdc::rng::derive(d, "a", i));
      const auto b = Hypervector::random(d, imhdc::rng::derive(d, "b", i));
      ASSERT_EQ(d - imhdc::hamming(a, b), imhdc::dot(a, b) + imhdc::dot(~a, ~b));
    }
  }
}

TEST(Hypervector, HandEnumeratedSimilarities) {
  const auto a = hv("1010");
  const auto b = hv("1100");
  EXPECT_EQ(imhdc::hamming(a, b), 2U);
  EXPECT_EQ(imhdc::dot(a, b), 1U);
  EXPECT_EQ(imhdc::dot_complement(a, b), 1U);
}

TEST(Hypervector, RandomPairDotConcentrates) {
  // Binomial(10000, 1/4): sigma ~ 43.
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto d = imhdc::dot(Hypervector::random(10000, 1000 + s), Hypervector::random(10000, 2000 + s));
    EXPECT_NEAR(static_cast<double>(d), 2500.0, 250.0);
  }
}

TEST(Hypervector, QuasiOrthogonalityEnvelope) {
  double sum = 0;
  std::size_t worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto h = imhdc::hamming(Hypervector::random(10000, imhdc::rng::derive(1, "qo-a", i)),
                                  Hypervector::random(10000, imhdc::rng::derive(1, "qo-b", i)));
    sum += static_cast<double>(h);
    worst = std::max<std::size_t>(worst, h > 5000 ? h - 5000 : 5000 - h);
  }
  EXPECT_NEAR(sum / 1000.0, 5000.0, 15.0);
  EXPECT_LE(worst, 350U);
}

TEST(Hypervector, StringRoundTrip) {
  EXPECT_EQ(hv("0110101").to_string(), "0110101");
  EXPECT_THROW(Hypervector::from_string("01x"), imhdc::InvalidArgument);
}

TEST(Accumulator, UnanimousMajority) {
  const auto x = Hypervector::random(100, 4);
  Accumulator acc(100);
  for (int i = 0; i < 3; ++i) acc.add(x);
  EXPECT_EQ(acc.binarize(1.5), x);
}

TEST(Accumulator, StrictThreshold) {
  Accumulator acc(3);
  acc.add(hv("110"));
  acc.add(hv("100"));
  acc.add(hv("100"));
  EXPECT_EQ(acc.counts(), (std::vector<std::uint64_t>{3, 1, 0}));
  EXPECT_EQ(acc.binarize(1.5), hv("100"));
  EXPECT_EQ(acc.binarize(1.0), hv("100"));  // count 1 == threshold stays 0
  EXPECT_EQ(acc.binarize(0.0), hv("110"));
}

TEST(Accumulator, CountsTwoOneZero) {
  Accumulator acc(3);
  acc.add(hv("110"));
  acc.add(hv("100"));
  acc.add(hv("000"));
  EXPECT_EQ(acc.total_added(), 3U);
  EXPECT_EQ(acc.binarize(1.5), hv("100"));
}

TEST(Accumulator, ErrorsOnEmptyAndNegative) {
  Accumulator acc(8);
  EXPECT_THROW((void)acc.binarize(0.5), imhdc::InvalidState);
  acc.add(Hypervector(8));
  EXPECT_THROW((void)acc.binarize(-1.0), imhdc::InvalidArgument);
  EXPECT_THROW(acc.add(Hypervector(9)), imhdc::InvalidArgument);
}

TEST(Accumulator, MatchesNaiveCounts) {
  for (std::size_t d : {65, 200}) {
    Accumulator acc(d);
    std::vector<std::uint64_t> expect(d, 0);
    for (int i = 0; i < 300; ++i) {
      const auto v = Hypervector::random(d, imhdc::rng::derive(9, "acc", i));
      acc.add(v);
      for (std::size_t j = 0; j < d; ++j) expect[j] += v.get(j) ? 1 : 0;
    }
    EXPECT_EQ(acc.counts(), expect);
    for (std::size_t j = 0; j < d; ++j) ASSERT_LE(acc.count(j), acc.total_added());
    const auto b = acc.binarize(150.0);
    for (std::size_t j = 0; j < d; ++j) EXPECT_EQ(b.get(j), expect[j] > 150);
  }
}

TEST(Majority, OddInputs) {
  std::vector<Hypervector> in{hv("1100"), hv("1010"), hv("0110")};
  EXPECT_EQ(imhdc::majority(in), hv("1110"));
  in.pop_back();
  EXPECT_THROW((void)imhdc::majority(in), imhdc::InvalidArgument);
}

TEST(Serialization, RoundTripAndValidation) {
  for (std::size_t d : kDims) {
    const auto x = Hypervector::random(d, d + 1);
    std::vector<std::uint8_t> bytes;
    imhdc::append_serialized(x, bytes);
    EXPECT_EQ(bytes.size(), 4 + (d + 7) / 8);
    std::size_t offset = 0;
    EXPECT_EQ(imhdc::parse_serialized(bytes, offset), x);
    EXPECT_EQ(offset, bytes.size());
  }
  std::vector<std::uint8_t> bytes;
  imhdc::append_serialized(hv("101"), bytes);
  EXPECT_EQ(bytes, (std::vector<std::uint8_t>{3, 0, 0, 0, 0b101}));
  bytes.back() |= 0x80;  // padding bit
  std::size_t offset = 0;
  EXPECT_THROW((void)imhdc::parse_serialized(bytes, offset), imhdc::InvalidArgument);
  bytes.pop_back();
  offset = 0;
  EXPECT_THROW((void)imhdc::parse_serialized(bytes, offset), imhdc::InvalidArgument);
}
