#include <gtest/gtest.h>

#include "smfret/model.hpp"
#include "test_support.hpp"

namespace smfret {
namespace {

TEST(FretTrace, HoldsExactCopies) {
  const FretTrace t({10, 0, 22}, {5, 0, 18}, 1.0);
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t.donor()[2], 22.0);
  EXPECT_EQ(t.acceptor()[0], 5.0);
  EXPECT_EQ(t.bin_width_ms(), 1.0);
}

TEST(FretTrace, RejectsBadInput) {
  EXPECT_SMFRET_ERROR(FretTrace({10}, {5, 6}, 1.0), LengthMismatch);
  EXPECT_SMFRET_ERROR(FretTrace({-1}, {0}, 1.0), NegativeCount);
  EXPECT_SMFRET_ERROR(FretTrace({}, {}, 1.0), EmptyTrace);
  EXPECT_SMFRET_ERROR(FretTrace({1}, {1}, 0.0), InvalidParameter);
}

TEST(FretTrace, KeepsFractionalCounts) {
  const FretTrace t({9.7}, {4.8}, 1.0);
  EXPECT_EQ(t.donor()[0], 9.7);
}

TEST(AlexTrace, Construction) {
  const AlexTrace t({1, 2}, {3, 4}, {5, 6}, {7, 8}, 1.0);
  EXPECT_EQ(t.size(), 2u);
  EXPECT_EQ(t.channel(AlexChannel::DA)[1], 4.0);
  EXPECT_EQ(t.channel(AlexChannel::AA)[0], 7.0);
  EXPECT_SMFRET_ERROR(AlexTrace({1, 2}, {1, 2}, {1, 2}, {1, 2, 3}, 1.0), LengthMismatch);
  EXPECT_SMFRET_ERROR(AlexTrace({1}, {1}, {-2}, {1}, 1.0), NegativeCount);
  EXPECT_SMFRET_ERROR(AlexTrace({}, {}, {}, {}, 1.0), EmptyTrace);
}

TEST(AlexTrace, AllZeroIsValidBackgroundOnly) {
  const std::vector<double> z(5, 0.0);
  const AlexTrace t(z, z, z, z, 1.0);
  EXPECT_EQ(t.size(), 5u);
}

TEST(AlexTrace, DonorExcitationPair) {
  const AlexTrace t({1, 2}, {3, 4}, {5, 6}, {7, 8}, 1.0);
  const FretTrace f = t.donor_excitation();
  EXPECT_EQ(f.donor()[1], 2.0);
  EXPECT_EQ(f.acceptor()[1], 6.0);
}

TEST(BurstSet, RequiresIncreasingIndices) {
  EXPECT_NO_THROW(FretBurstSet({{1, 1, 0}, {1, 1, 4}}));
  EXPECT_SMFRET_ERROR(FretBurstSet({{1, 1, 4}, {1, 1, 4}}), InvalidParameter);
  EXPECT_SMFRET_ERROR(FretBurstSet({{1, 1, 5}, {1, 1, 2}}), InvalidParameter);
}

TEST(CorrectionParams, Validate) {
  CorrectionParams p{0.3, 0.2, 0.05, 0.01, 1.0, 15, 15};
  EXPECT_NO_THROW(p.validate());
  p.cross_DtoA = 1.0;
  EXPECT_SMFRET_ERROR(p.validate(), FractionOutOfRange);
  p.cross_DtoA = 0.05;
  p.gamma = 0.0;
  EXPECT_SMFRET_ERROR(p.validate(), InvalidParameter);
  p.gamma = 1.0;
  p.auto_donor = -0.1;
  EXPECT_SMFRET_ERROR(p.validate(), NegativeParameter);
}

}  // namespace
}  // namespace smfret
