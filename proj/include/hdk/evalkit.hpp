#pragma once

// Layout quality metrics: floor-polygon and room-prism IoU, aggregated by
// corner count.

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hdk/layout.hpp"
#include "hdk/polygon.hpp"

namespace hdk {

/// Area of the intersection of two simple polygons (either orientation).
/// Throws kGeometry for self-intersecting input.
double polygon_intersection_area(std::span<const PlanPoint> a, std::span<const PlanPoint> b);

enum class CornerBucket { k4, k6, k8, k10Plus };

const char* to_string(CornerBucket bucket);

/// Bucket for a ground-truth corner count; odd counts below 10 have none.
std::optional<CornerBucket> bucket_for(std::size_t corners);

struct IoUReport {
  double iou_2d = 0.0;
  double iou_3d = 0.0;
  std::size_t gt_corners = 0;
  std::optional<CornerBucket> bucket;
};

/// Floors are aligned and each room spans camera_height * (1 + ceiling_ratio).
IoUReport layout_iou(const LayoutAnnotation& pred, const LayoutAnnotation& gt);

struct BucketRow {
  std::size_t count = 0;
  double mean_iou_2d = 0.0;
  double mean_iou_3d = 0.0;
};

struct BucketTable {
  std::array<BucketRow, 4> buckets{};  // indexed by CornerBucket
  BucketRow overall;
};

BucketTable bucket_by_corners(std::span<const IoUReport> reports);

/// Aligned columns, one row per bucket plus overall, IoU in percent.
std::string format_table(const BucketTable& table);

}  // namespace hdk
