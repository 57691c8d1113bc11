#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hdk/evalkit.hpp"
#include "rooms.hpp"
#include "test_util.hpp"

namespace hdk {
namespace {

using testing::error_code_of;

Polygon box(double x0, double z0, double x1, double z1) { return {{x0, z0}, {x1, z0}, {x1, z1}, {x0, z1}}; }

Polygon shifted(const Polygon& p, double dx, double dz) {
  Polygon out;
  for (const PlanPoint& q : p) out.push_back({q.x + dx, q.z + dz});
  return out;
}

// Even-odd crossing test, independent of the library's containment code.
bool inside(const Polygon& poly, double x, double z) {
  bool in = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const PlanPoint& a = poly[i];
    const PlanPoint& b = poly[j];
    if ((a.z > z) != (b.z > z) && x < (b.x - a.x) * (z - a.z) / (b.z - a.z) + a.x) in = !in;
  }
  return in;
}

TEST(IoU, IdenticalLayouts) {
  const LayoutAnnotation a(box(-1, -1, 1, 1), 1.6, 1.0);
  const IoUReport r = layout_iou(a, a);
  EXPECT_EQ(r.iou_2d, 1.0);
  EXPECT_EQ(r.iou_3d, 1.0);
  EXPECT_EQ(r.gt_corners, 4u);
  EXPECT_EQ(r.bucket, CornerBucket::k4);
}

TEST(IoU, HeightMismatchOnlyAffects3d) {
  const LayoutAnnotation gt(box(-1, -1, 1, 1), 1.6, 1.0);               // 3.2 m
  const LayoutAnnotation pred(box(-1, -1, 1, 1), 1.6, 2.9 / 1.6 - 1.0);  // 2.9 m
  const IoUReport r = layout_iou(pred, gt);
  EXPECT_EQ(r.iou_2d, 1.0);
  EXPECT_NEAR(r.iou_3d, 0.90625, 1e-12);
}

TEST(IoU, HalfOverlappingSquares) {
  const LayoutAnnotation a(box(-0.7, -0.5, 0.3, 0.5), 1.6, 1.0);
  const LayoutAnnotation b(box(-0.2, -0.5, 0.8, 0.5), 1.6, 1.0);
  EXPECT_NEAR(polygon_intersection_area(a.corners(), b.corners()), 0.5, 1e-15);
  const IoUReport r = layout_iou(a, b);
  EXPECT_NEAR(r.iou_2d, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(r.iou_3d, 1.0 / 3.0, 1e-15);
}

TEST(IoU, IntersectionAreaOfConcaveShapes) {
  // L against a box over its missing quadrant: 0.75 from the lower arm and
  // 0.5 from the upper one.
  const Polygon l{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
  EXPECT_NEAR(polygon_intersection_area(l, box(0.5, 0.5, 2.5, 2.5)), 1.25, 1e-12);
  EXPECT_NEAR(polygon_intersection_area(l, l), 3.0, 1e-12);
  Polygon reversed(l.rbegin(), l.rend());
  EXPECT_NEAR(polygon_intersection_area(reversed, box(0.5, 0.5, 2.5, 2.5)), 1.25, 1e-12);
  EXPECT_EQ(polygon_intersection_area(l, box(3, 3, 4, 4)), 0.0);
}

TEST(IoU, SelfIntersectingInputIsRejected) {
  const Polygon bowtie{{0, 0}, {1, 1}, {1, 0}, {0, 1}};
  EXPECT_EQ(error_code_of([&] { polygon_intersection_area(bowtie, box(0, 0, 1, 1)); }), ErrorCode::kGeometry);
}

TEST(IoU, MatchesMonteCarloArea) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 3; ++trial) {
    const Polygon a = testing::random_manhattan_room(rng, 6, 12);
    const Polygon b = shifted(testing::random_manhattan_room(rng, 6, 12), 0.3, -0.2);
    double x0 = 1e9, z0 = 1e9, x1 = -1e9, z1 = -1e9;
    for (const Polygon* p : {&a, &b}) {
      for (const PlanPoint& q : *p) {
        x0 = std::min(x0, q.x), z0 = std::min(z0, q.z), x1 = std::max(x1, q.x), z1 = std::max(z1, q.z);
      }
    }
    std::uniform_real_distribution<double> ux(x0, x1), uz(z0, z1);
    const int samples = 1'000'000;
    int hits = 0;
    for (int s = 0; s < samples; ++s) {
      const double x = ux(rng), z = uz(rng);
      hits += inside(a, x, z) && inside(b, x, z);
    }
    const double box_area = (x1 - x0) * (z1 - z0);
    const double p = static_cast<double>(hits) / samples;
    const double estimate = p * box_area;
    const double sigma = box_area * std::sqrt(p * (1 - p) / samples);
    EXPECT_NEAR(polygon_intersection_area(a, b), estimate, 3 * sigma + 1e-12) << trial;
  }
}

TEST(IoU, SymmetricBoundedAndTranslationInvariant) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Polygon pa = testing::random_manhattan_room(rng);
    const Polygon pb = testing::random_manhattan_room(rng);
    const LayoutAnnotation a(pa, 1.6, 1.0), b(pb, 1.6, 0.7);
    const IoUReport ab = layout_iou(a, b), ba = layout_iou(b, a);
    EXPECT_NEAR(ab.iou_2d, ba.iou_2d, 1e-12);
    EXPECT_NEAR(ab.iou_3d, ba.iou_3d, 1e-12);
    for (double v : {ab.iou_2d, ab.iou_3d}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
    EXPECT_LT(ab.iou_3d, 1.0);
    const LayoutAnnotation ta(shifted(pa, 0.03, -0.02), 1.6, 1.0), tb(shifted(pb, 0.03, -0.02), 1.6, 0.7);
    const IoUReport moved = layout_iou(ta, tb);
    EXPECT_NEAR(moved.iou_2d, ab.iou_2d, 1e-9);
    EXPECT_NEAR(moved.iou_3d, ab.iou_3d, 1e-9);
  }
}

TEST(Buckets, CornerCounts) {
  EXPECT_EQ(bucket_for(4), CornerBucket::k4);
  EXPECT_EQ(bucket_for(6), CornerBucket::k6);
  EXPECT_EQ(bucket_for(8), CornerBucket::k8);
  EXPECT_EQ(bucket_for(10), CornerBucket::k10Plus);
  EXPECT_EQ(bucket_for(13), CornerBucket::k10Plus);
  EXPECT_FALSE(bucket_for(5).has_value());
  EXPECT_FALSE(bucket_for(9).has_value());
}

TEST(Buckets, SingleSample) {
  const IoUReport r{1.0, 1.0, 4, CornerBucket::k4};
  const BucketTable t = bucket_by_corners(std::span(&r, 1));
  EXPECT_EQ(t.overall.count, 1u);
  EXPECT_EQ(t.overall.mean_iou_2d, 1.0);
  EXPECT_EQ(t.buckets[0].mean_iou_2d, 1.0);
  EXPECT_EQ(t.buckets[1].count, 0u);
}

TEST(Buckets, TwoSamples) {
  const std::vector<IoUReport> rs{{0.8, 0.8, 4, CornerBucket::k4}, {0.6, 0.6, 6, CornerBucket::k6}};
  const BucketTable t = bucket_by_corners(rs);
  EXPECT_NEAR(t.overall.mean_iou_2d, 0.7, 1e-15);
  EXPECT_NEAR(t.overall.mean_iou_3d, 0.7, 1e-15);
  EXPECT_EQ(t.buckets[0].mean_iou_2d, 0.8);
  EXPECT_EQ(t.buckets[1].mean_iou_2d, 0.6);
}

TEST(Buckets, TableOverManyRooms) {
  std::mt19937_64 rng(40);
  std::vector<IoUReport> reports;
  for (int i = 0; i < 40; ++i) {
    const LayoutAnnotation gt(testing::random_manhattan_room(rng), 1.6, 1.0);
    reports.push_back(layout_iou(gt, gt));
  }
  const BucketTable t = bucket_by_corners(reports);
  EXPECT_EQ(t.overall.count, 40u);
  std::size_t bucketed = 0;
  for (const BucketRow& row : t.buckets) {
    bucketed += row.count;
    if (row.count > 0) EXPECT_NEAR(row.mean_iou_2d, 1.0, 1e-12);
  }
  EXPECT_LE(bucketed, 40u);
  const std::string text = format_table(t);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 6);
  EXPECT_NE(text.find("overall"), std::string::npos);
  EXPECT_NE(text.find("100.00"), std::string::npos);
}

}  // namespace
}  // namespace hdk
