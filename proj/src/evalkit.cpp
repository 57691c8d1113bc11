#include "hdk/evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "hdk/error.hpp"

namespace hdk {

namespace {

struct Tri {
  std::array<PlanPoint, 3> p;
  double sign;
};

double cross(const PlanPoint& o, const PlanPoint& a, const PlanPoint& b) {
  return (a.x - o.x) * (b.z - o.z) - (a.z - o.z) * (b.x - o.x);
}

// Fan from vertex 0; the polygon's indicator is the signed sum of the fan
// triangles' indicators, with each triangle stored counter-clockwise.
std::vector<Tri> fan(std::span<const PlanPoint> poly) {
  std::vector<Tri> tris;
  for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
    const double c = cross(poly[0], poly[i], poly[i + 1]);
    if (c == 0.0) continue;
    if (c > 0.0) {
      tris.push_back({{poly[0], poly[i], poly[i + 1]}, 1.0});
    } else {
      tris.push_back({{poly[0], poly[i + 1], poly[i]}, -1.0});
    }
  }
  return tris;
}

double convex_overlap(const Tri& s, const Tri& c) {
  std::vector<PlanPoint> out(s.p.begin(), s.p.end());
  std::vector<PlanPoint> in;
  for (int e = 0; e < 3 && !out.empty(); ++e) {
    const PlanPoint& a = c.p[static_cast<std::size_t>(e)];
    const PlanPoint& b = c.p[static_cast<std::size_t>((e + 1) % 3)];
    in.swap(out);
    out.clear();
    for (std::size_t i = 0; i < in.size(); ++i) {
      const PlanPoint& p = in[i];
      const PlanPoint& q = in[(i + 1) % in.size()];
      const double dp = cross(a, b, p);
      const double dq = cross(a, b, q);
      if (dp >= 0.0) out.push_back(p);
      if ((dp >= 0.0) != (dq >= 0.0)) {
        const double t = dp / (dp - dq);
        out.push_back({p.x + t * (q.x - p.x), p.z + t * (q.z - p.z)});
      }
    }
  }
  if (out.size() < 3) return 0.0;
  return std::max(0.0, signed_area(out));
}

void require_simple(std::span<const PlanPoint> poly, const char* which) {
  if (poly.size() < 3 || !is_simple(poly)) {
    fail(ErrorCode::kGeometry, std::string(which) + " polygon is not simple");
  }
}

}  // namespace

double polygon_intersection_area(std::span<const PlanPoint> a, std::span<const PlanPoint> b) {
  require_simple(a, "first");
  require_simple(b, "second");
  const auto ta = fan(a);
  const auto tb = fan(b);
  double total = 0.0;
  for (const Tri& x : ta) {
    for (const Tri& y : tb) total += x.sign * y.sign * convex_overlap(x, y);
  }
  const double area_a = signed_area(a);
  const double area_b = signed_area(b);
  if ((area_a < 0.0) != (area_b < 0.0)) total = -total;
  const double cap = std::min(std::abs(area_a), std::abs(area_b));
  return std::clamp(total, 0.0, cap);
}

const char* to_string(CornerBucket bucket) {
  switch (bucket) {
    case CornerBucket::k4: return "4";
    case CornerBucket::k6: return "6";
    case CornerBucket::k8: return "8";
    case CornerBucket::k10Plus: return "10+";
  }
  return "?";
}

std::optional<CornerBucket> bucket_for(std::size_t corners) {
  if (corners >= 10) return CornerBucket::k10Plus;
  if (corners == 4) return CornerBucket::k4;
  if (corners == 6) return CornerBucket::k6;
  if (corners == 8) return CornerBucket::k8;
  return std::nullopt;
}

IoUReport layout_iou(const LayoutAnnotation& pred, const LayoutAnnotation& gt) {
  const double inter = polygon_intersection_area(pred.corners(), gt.corners());
  const double ap = std::abs(signed_area(pred.corners()));
  const double ag = std::abs(signed_area(gt.corners()));
  const double hp = pred.room_height();
  const double hg = gt.room_height();

  IoUReport r;
  r.iou_2d = std::clamp(inter / (ap + ag - inter), 0.0, 1.0);
  if (hp == hg) {
    r.iou_3d = r.iou_2d;
  } else {
    const double vi = inter * std::min(hp, hg);
    r.iou_3d = std::clamp(vi / (ap * hp + ag * hg - vi), 0.0, 1.0);
  }
  r.gt_corners = gt.corners().size();
  r.bucket = bucket_for(r.gt_corners);
  return r;
}

BucketTable bucket_by_corners(std::span<const IoUReport> reports) {
  BucketTable t;
  auto add = [](BucketRow& row, const IoUReport& r) {
    ++row.count;
    row.mean_iou_2d += r.iou_2d;
    row.mean_iou_3d += r.iou_3d;
  };
  for (const IoUReport& r : reports) {
    add(t.overall, r);
    if (r.bucket) add(t.buckets[static_cast<std::size_t>(*r.bucket)], r);
  }
  auto finish = [](BucketRow& row) {
    if (row.count == 0) return;
    row.mean_iou_2d /= static_cast<double>(row.count);
    row.mean_iou_3d /= static_cast<double>(row.count);
  };
  for (BucketRow& row : t.buckets) finish(row);
  finish(t.overall);
  return t;
}

std::string format_table(const BucketTable& table) {
  std::string out;
  char line[128];
  std::snprintf(line, sizeof line, "%-8s %6s %8s %8s\n", "corners", "n", "2D IoU", "3D IoU");
  out += line;
  auto row = [&](const char* name, const BucketRow& r) {
    if (r.count == 0) {
      std::snprintf(line, sizeof line, "%-8s %6zu %8s %8s\n", name, r.count, "-", "-");
    } else {
      std::snprintf(line, sizeof line, "%-8s %6zu %8.2f %8.2f\n", name, r.count, 100.0 * r.mean_iou_2d,
                    100.0 * r.mean_iou_3d);
    }
    out += line;
  };
  for (std::size_t i = 0; i < table.buckets.size(); ++i) {
    row(to_string(static_cast<CornerBucket>(i)), table.buckets[i]);
  }
  row("overall", table.overall);
  return out;
}

}  // namespace hdk
