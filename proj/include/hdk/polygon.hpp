#pragma once

// Floor-plan polygons in the horizontal (x, z) plane.

#include <span>
#include <vector>

namespace hdk {

struct PlanPoint {
  double x = 0.0;
  double z = 0.0;

  friend constexpr bool operator==(const PlanPoint&, const PlanPoint&) = default;
};

using Polygon = std::vector<PlanPoint>;

/// Shoelace area with x as the first axis: positive for counter-clockwise
/// order as seen looking along +y (from above the floor).
double signed_area(std::span<const PlanPoint> poly);

/// True if no two non-adjacent edges touch and adjacent edges meet only at
/// their shared vertex. Requires at least 3 vertices.
bool is_simple(std::span<const PlanPoint> poly);

/// Strict interior test; points on the boundary are reported as outside.
bool strictly_contains(std::span<const PlanPoint> poly, const PlanPoint& p);

/// Rotation about the origin by angle (counter-clockwise in the (x, z) frame).
PlanPoint rotate(const PlanPoint& p, double angle);

}  // namespace hdk
