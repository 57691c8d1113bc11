#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hdk/error.hpp"
#include "hdk/sphere_geometry.hpp"
#include "test_util.hpp"

namespace hdk {
namespace {

void expect_vec(const Vec3& v, double x, double y, double z, double tol = 1e-15) {
  EXPECT_NEAR(v.x, x, tol);
  EXPECT_NEAR(v.y, y, tol);
  EXPECT_NEAR(v.z, z, tol);
}

ErrorCode code_of(const auto& f) { return testing::error_code_of(f); }
TEST(SphericalToCartesian, AxisCases) {
  expect_vec(spherical_to_cartesian({0.0, 0.0}), 0, 0, 1);
  expect_vec(spherical_to_cartesian({kPi / 2, 0.0}), 1, 0, 0);
  expect_vec(spherical_to_cartesian({0.0, kPi / 2}), 0, 1, 0);
}

TEST(SphericalToCartesian, RejectsOutOfRange) {
  EXPECT_EQ(code_of([] { spherical_to_cartesian({4.0, 0.0}); }), ErrorCode::kDomain);
  EXPECT_EQ(code_of([] { spherical_to_cartesian({0.0, 1.6}); }), ErrorCode::kDomain);
  EXPECT_EQ(code_of([] { spherical_to_cartesian({std::nan(""), 0.0}); }), ErrorCode::kDomain);
}

TEST(SphericalToCartesian, UnitNormOnRandomInputs) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> th(-kPi, kPi), ph(-kPi / 2, kPi / 2);
  for (int i = 0; i < 10000; ++i) {
    EXPECT_NEAR(norm(spherical_to_cartesian({th(rng), ph(rng)})), 1.0, 1e-12);
  }
}

TEST(CartesianToSpherical, AxisCases) {
  const auto a = cartesian_to_spherical({0, 0, 1});
  EXPECT_EQ(a.theta, 0.0);
  EXPECT_EQ(a.phi, 0.0);
  const auto b = cartesian_to_spherical({2, 0, 0});
  EXPECT_NEAR(b.theta, kPi / 2, 1e-15);
  EXPECT_EQ(b.phi, 0.0);
}

TEST(CartesianToSpherical, ZeroVectorIsDomainError) {
  EXPECT_EQ(code_of([] { cartesian_to_spherical({0, 0, 0}); }), ErrorCode::kDomain);
}

TEST(CartesianToSpherical, PolesGiveZeroLongitude) {
  EXPECT_EQ(cartesian_to_spherical({0, 3, 0}).theta, 0.0);
  EXPECT_NEAR(cartesian_to_spherical({0, -1, 0}).phi, -kPi / 2, 1e-15);
}

TEST(CartesianToSpherical, SeamIsCanonical) {
  EXPECT_EQ(cartesian_to_spherical({0, 0, -1}).theta, -kPi);
  EXPECT_EQ(cartesian_to_spherical({-0.0, 0, -1}).theta, -kPi);
  EXPECT_EQ(canonical_longitude(kPi), -kPi);
  EXPECT_NEAR(canonical_longitude(3 * kPi / 2), -kPi / 2, 1e-15);
}

TEST(CartesianToSpherical, RoundTripOnUniformSphere) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (int i = 0; i < 10000; ++i) {
    const Vec3 p{g(rng), g(rng), g(rng)};
    const double n = norm(p);
    const Vec3 back = spherical_to_cartesian(cartesian_to_spherical(p));
    expect_vec(back, p.x / n, p.y / n, p.z / n, 1e-10);
  }
}

TEST(CartesianToSpherical, ExactScaleInvariance) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 p{u(rng), u(rng), u(rng)};
    for (double s : {0.5, 2.0, 3.0, 1e-3}) {
      const auto a = cartesian_to_spherical(p);
      const auto b = cartesian_to_spherical(p * s);
      if (s == 0.5 || s == 2.0) {
        EXPECT_EQ(a, b);
      } else {
        EXPECT_NEAR(a.theta, b.theta, 1e-15);
        EXPECT_NEAR(a.phi, b.phi, 1e-15);
      }
    }
  }
}

TEST(PixelToSpherical, CenterAndLeftEdge) {
  const auto c = pixel_to_spherical(511.5, 255.5, 1024, 512);
  EXPECT_NEAR(c.theta, 0.0, 1e-15);
  EXPECT_NEAR(c.phi, 0.0, 1e-15);
  const auto l = pixel_to_spherical(0, 255.5, 1024, 512);
  EXPECT_NEAR(l.theta, -kPi + kPi / 1024, 1e-15);
  EXPECT_NEAR(l.phi, 0.0, 1e-15);
}

TEST(PixelToSpherical, BottomRowsAreFloor) {
  EXPECT_GT(pixel_to_spherical(10, 500, 1024, 512).phi, 0.0);
  EXPECT_LT(pixel_to_spherical(10, 5, 1024, 512).phi, 0.0);
}

TEST(PixelToSpherical, LastHalfPixelWrapsAndClamps) {
  const auto q = pixel_to_spherical(1023.75, 511.75, 1024, 512);
  EXPECT_NEAR(q.theta, -kPi + 0.5 * kPi / 1024, 1e-15);
  EXPECT_EQ(q.phi, kPi / 2);
}

TEST(PixelToSpherical, AspectAndRangeErrors) {
  EXPECT_EQ(code_of([] { pixel_to_spherical(0, 0, 1000, 512); }), ErrorCode::kFormat);
  EXPECT_EQ(code_of([] { pixel_to_spherical(1024, 0, 1024, 512); }), ErrorCode::kDomain);
  EXPECT_EQ(code_of([] { pixel_to_spherical(0, -1, 1024, 512); }), ErrorCode::kDomain);
}

TEST(PixelToSpherical, RoundTrip) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ux(0, 2048), uy(0, 1023.5);
  for (int i = 0; i < 10000; ++i) {
    const double x = ux(rng), y = uy(rng);
    const auto px = spherical_to_pixel(pixel_to_spherical(x, y, 2048, 1024), 2048, 1024);
    EXPECT_NEAR(px[0], x, 1e-10);
    EXPECT_NEAR(px[1], y, 1e-10);
  }
}

TEST(RayFan, FourRays) {
  const RayFan fan = make_ray_fan(4);
  ASSERT_EQ(fan.count(), 4);
  const double expect[] = {-kPi, -kPi / 2, 0.0, kPi / 2};
  for (int j = 0; j < 4; ++j) {
    EXPECT_DOUBLE_EQ(fan.longitude(j), expect[j]);
    EXPECT_EQ(fan.direction(j).y, 0.0);
    EXPECT_NEAR(fan.direction(j).x, std::sin(expect[j]), 1e-15);
    EXPECT_NEAR(fan.direction(j).z, std::cos(expect[j]), 1e-15);
  }
}

TEST(RayFan, DefaultSizeIsUnitAndEquiangular) {
  const RayFan fan = make_ray_fan(256);
  ASSERT_EQ(fan.count(), 256);
  for (int j = 0; j < 256; ++j) {
    EXPECT_NEAR(norm(fan.direction(j)), 1.0, 1e-15);
    if (j > 0) EXPECT_NEAR(fan.longitude(j) - fan.longitude(j - 1), kTwoPi / 256, 1e-14);
  }
}

TEST(RayFan, AdjacentDotProductsAreEqual) {
  for (int m : {4, 5, 7, 16, 100, 256, 1024, 4096}) {
    const RayFan fan = make_ray_fan(m);
    const double c = std::cos(kTwoPi / m);
    for (int j = 0; j < m; ++j) {
      EXPECT_NEAR(dot(fan.direction(j), fan.direction((j + 1) % m)), c, 1e-12) << "M=" << m;
    }
  }
}

TEST(RayFan, StrictlyIncreasingOverOnePeriod) {
  const RayFan fan = make_ray_fan(37);
  EXPECT_EQ(fan.longitude(0), -kPi);
  for (int j = 1; j < fan.count(); ++j) EXPECT_LT(fan.longitude(j - 1), fan.longitude(j));
  EXPECT_LT(fan.longitude(fan.count() - 1), kPi);
}

TEST(RayFan, TooFewRays) {
  EXPECT_EQ(code_of([] { make_ray_fan(3); }), ErrorCode::kDomain);
}

}  // namespace
}  // namespace hdk
