#include <gtest/gtest.h>

#include "hdk/polygon.hpp"

namespace hdk {
namespace {

const Polygon kSquare{{0, 0}, {1, 0}, {1, 1}, {0, 1}};

TEST(Polygon, SignedAreaOrientation) {
  EXPECT_DOUBLE_EQ(signed_area(kSquare), 1.0);
  Polygon cw(kSquare.rbegin(), kSquare.rend());
  EXPECT_DOUBLE_EQ(signed_area(cw), -1.0);
}

TEST(Polygon, SimpleChecks) {
  EXPECT_TRUE(is_simple(kSquare));
  EXPECT_FALSE(is_simple(Polygon{{0, 0}, {1, 1}, {1, 0}, {0, 1}}));
  EXPECT_FALSE(is_simple(Polygon{{0, 0}, {2, 0}, {1, 0}, {1, 1}}));
  EXPECT_FALSE(is_simple(Polygon{{0, 0}, {1, 0}, {1, 0}, {0, 1}}));
}

TEST(Polygon, StrictContainment) {
  EXPECT_TRUE(strictly_contains(kSquare, {0.5, 0.5}));
  EXPECT_FALSE(strictly_contains(kSquare, {1.0, 0.5}));
  EXPECT_FALSE(strictly_contains(kSquare, {0.0, 0.0}));
  EXPECT_FALSE(strictly_contains(kSquare, {1.5, 0.5}));
  const Polygon l{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
  EXPECT_TRUE(strictly_contains(l, {0.5, 1.5}));
  EXPECT_FALSE(strictly_contains(l, {1.5, 1.5}));
}

TEST(Polygon, RotateQuarterTurn) {
  const PlanPoint p = rotate({1, 0}, 1.5707963267948966);
  EXPECT_NEAR(p.x, 0.0, 1e-15);
  EXPECT_NEAR(p.z, 1.0, 1e-15);
}

}  // namespace
}  // namespace hdk
