#include <gtest/gtest.h>

#include <cmath>

#include "imhdc/errors.hpp"
#include "imhdc/item_memory.hpp"

using imhdc::Hypervector;

TEST(ItemMemory, GenerationIsSeeded) {
  const auto a = imhdc::generate_im(27, 10000, 1);
  const auto b = imhdc::generate_im(27, 10000, 1);
  const auto c = imhdc::generate_im(27, 10000, 2);
  EXPECT_EQ(a, b);
  EXPECT_NE(a.at(0), c.at(0));
  EXPECT_EQ(a.size(), 27U);
  EXPECT_EQ(a.dim(), 10000U);
}

TEST(ItemMemory, PairsWithinSevenSigmaBand) {
  const auto im = imhdc::generate_im(27, 10000, 3);
  const double band = imhdc::quasiorthogonal_band(10000);
  EXPECT_DOUBLE_EQ(band, 7.0 * std::sqrt(10000.0 / 4.0));
  for (std::size_t i = 0; i < im.size(); ++i) {
    for (std::size_t j = i + 1; j < im.size(); ++j) {
      EXPECT_NEAR(static_cast<double>(imhdc::hamming(im.at(i), im.at(j))), 5000.0, band);
    }
  }
}

TEST(ItemMemory, LookupBySymbol) {
  const auto im = imhdc::generate_im({"a", "b", " "}, 128, 5);
  EXPECT_EQ(im.lookup("b"), im.at(1));
  EXPECT_EQ(im.index_of(" "), 2U);
  EXPECT_THROW((void)im.lookup("z"), imhdc::LookupError);
  EXPECT_THROW((void)im.at(3), imhdc::LookupError);
}

TEST(ItemMemory, RejectsBadInput) {
  EXPECT_THROW((void)imhdc::generate_im(0, 100, 1), imhdc::InvalidArgument);
  EXPECT_THROW((void)imhdc::generate_im({"a", "a"}, 100, 1), imhdc::InvalidArgument);
  EXPECT_THROW((void)imhdc::generate_im(3, 0, 1), imhdc::InvalidArgument);
}

TEST(ContinuousItemMemory, EndpointsAreIndependent) {
  const auto cim = imhdc::generate_cim(22, 10000, 1);
  EXPECT_EQ(cim.levels(), 22U);
  EXPECT_NEAR(static_cast<double>(imhdc::hamming(cim.level(0), cim.level(21))), 5000.0,
              imhdc::quasiorthogonal_band(10000));
}

TEST(ContinuousItemMemory, DistanceGrowsLinearlyWithLevelGap) {
  const auto cim = imhdc::generate_cim(22, 10000, 4);
  const auto span = imhdc::hamming(cim.level(0), cim.level(21));
  for (std::size_t a = 0; a < 22; ++a) {
    for (std::size_t b = a; b < 22; ++b) {
      // Level i has floor(i * D / 21) of the D endpoint differences applied.
      const auto expect = (b * span) / 21 - (a * span) / 21;
      EXPECT_EQ(imhdc::hamming(cim.level(a), cim.level(b)), expect);
      if (b + 1 < 22) {
        EXPECT_LE(imhdc::hamming(cim.level(a), cim.level(b)),
                  imhdc::hamming(cim.level(a), cim.level(b + 1)));
      }
    }
  }
}

TEST(ContinuousItemMemory, RejectsBadInput) {
  EXPECT_THROW((void)imhdc::generate_cim(1, 100, 1), imhdc::InvalidArgument);
  const auto cim = imhdc::generate_cim(3, 100, 1);
  EXPECT_THROW((void)cim.level(3), imhdc::InvalidArgument);
}
