#include "hdk/polygon.hpp"

#include <algorithm>
#include <cmath>

namespace hdk {

namespace {

double orient(const PlanPoint& a, const PlanPoint& b, const PlanPoint& c) {
  return (b.x - a.x) * (c.z - a.z) - (b.z - a.z) * (c.x - a.x);
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

bool on_segment(const PlanPoint& a, const PlanPoint& b, const PlanPoint& p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.z, b.z) <= p.z &&
         p.z <= std::max(a.z, b.z);
}

bool segments_touch(const PlanPoint& a, const PlanPoint& b, const PlanPoint& c, const PlanPoint& d) {
  const int o1 = sign(orient(a, b, c));
  const int o2 = sign(orient(a, b, d));
  const int o3 = sign(orient(c, d, a));
  const int o4 = sign(orient(c, d, b));
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

}  // namespace

double signed_area(std::span<const PlanPoint> poly) {
  double twice = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const PlanPoint& a = poly[i];
    const PlanPoint& b = poly[(i + 1) % n];
    twice += a.x * b.z - b.x * a.z;
  }
  return 0.5 * twice;
}

bool is_simple(std::span<const PlanPoint> poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (poly[i] == poly[(i + 1) % n]) return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const PlanPoint& a = poly[i];
    const PlanPoint& b = poly[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      const PlanPoint& c = poly[j];
      const PlanPoint& d = poly[(j + 1) % n];
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) {
        // Adjacent edges share one vertex; they must not fold back onto each other.
        const PlanPoint& shared = (j == i + 1) ? b : a;
        const PlanPoint& far_a = (j == i + 1) ? a : b;
        const PlanPoint& far_b = (j == i + 1) ? d : c;
        if (sign(orient(far_a, shared, far_b)) == 0) {
          const double dx1 = far_a.x - shared.x, dz1 = far_a.z - shared.z;
          const double dx2 = far_b.x - shared.x, dz2 = far_b.z - shared.z;
          if (dx1 * dx2 + dz1 * dz2 > 0.0) return false;
        }
        continue;
      }
      if (segments_touch(a, b, c, d)) return false;
    }
  }
  return true;
}

bool strictly_contains(std::span<const PlanPoint> poly, const PlanPoint& p) {
  const std::size_t n = poly.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const PlanPoint& a = poly[i];
    const PlanPoint& b = poly[j];
    if (sign(orient(a, b, p)) == 0 && on_segment(a, b, p)) return false;
    if ((a.z > p.z) != (b.z > p.z)) {
      const double x_cross = a.x + (p.z - a.z) * (b.x - a.x) / (b.z - a.z);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

PlanPoint rotate(const PlanPoint& p, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * p.x - s * p.z, s * p.x + c * p.z};
}

}  // namespace hdk
