#include "hdk/layout.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "hdk/error.hpp"

namespace hdk {

const char* to_string(Surface surface) { return surface == Surface::kFloor ? "floor" : "ceiling"; }

BoundaryPointSet::BoundaryPointSet(Surface surface, std::vector<SphericalPoint> points)
    : surface_(surface), points_(std::move(points)) {
  if (points_.size() < 3) {
    fail(ErrorCode::kDomain, "boundary needs at least 3 points, got " + std::to_string(points_.size()));
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const SphericalPoint& q = points_[i];
    check_range(q);
    if (q.theta >= kPi) fail(ErrorCode::kDomain, "boundary longitude must be canonical (< pi)");
    if (i > 0 && !(q.theta > points_[i - 1].theta)) {
      std::ostringstream os;
      os << "boundary longitudes must be strictly ascending (index " << i << ")";
      fail(ErrorCode::kDegenerate, os.str());
    }
    const bool sign_ok = surface_ == Surface::kFloor ? q.phi > 0.0 : q.phi < 0.0;
    if (!sign_ok) {
      std::ostringstream os;
      os << to_string(surface_) << " point " << i << " has latitude " << q.phi << " on the wrong side of the horizon";
      fail(ErrorCode::kDomain, os.str());
    }
  }
}

std::vector<double> BoundaryPointSet::longitudes() const {
  std::vector<double> out;
  out.reserve(points_.size());
  for (const auto& q : points_) out.push_back(q.theta);
  return out;
}

BoundaryPair::BoundaryPair(BoundaryPointSet floor, BoundaryPointSet ceiling)
    : floor_(std::move(floor)), ceiling_(std::move(ceiling)) {
  if (floor_.surface() != Surface::kFloor || ceiling_.surface() != Surface::kCeiling) {
    fail(ErrorCode::kDomain, "boundary pair surfaces are swapped");
  }
  if (floor_.size() != ceiling_.size()) {
    fail(ErrorCode::kShape, "floor and ceiling boundaries differ in size");
  }
  for (std::size_t i = 0; i < floor_.size(); ++i) {
    if (floor_[i].theta != ceiling_[i].theta) {
      fail(ErrorCode::kShape, "floor and ceiling longitudes differ at index " + std::to_string(i));
    }
  }
}

BoundaryPair BoundaryPair::from_latitudes(std::span<const double> thetas, std::span<const double> floor_phi,
                                          std::span<const double> ceiling_phi) {
  if (thetas.size() != floor_phi.size() || thetas.size() != ceiling_phi.size()) {
    fail(ErrorCode::kShape, "longitude and latitude lists differ in length");
  }
  std::vector<SphericalPoint> f, c;
  f.reserve(thetas.size());
  c.reserve(thetas.size());
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    f.push_back({thetas[i], floor_phi[i]});
    c.push_back({thetas[i], ceiling_phi[i]});
  }
  return BoundaryPair(BoundaryPointSet(Surface::kFloor, std::move(f)),
                      BoundaryPointSet(Surface::kCeiling, std::move(c)));
}

bool WallPlane::contains(double theta) const {
  if (theta_lo < theta_hi) return theta_lo <= theta && theta < theta_hi;
  if (theta_lo > theta_hi) return theta >= theta_lo || theta < theta_hi;
  return false;
}

double WallPlane::arc_length() const {
  return theta_lo <= theta_hi ? theta_hi - theta_lo : theta_hi + kTwoPi - theta_lo;
}

LayoutAnnotation::LayoutAnnotation(Polygon corners_xz, double camera_height, double ceiling_ratio)
    : corners_(std::move(corners_xz)), camera_height_(camera_height), ceiling_ratio_(ceiling_ratio) {
  if (!(camera_height_ > 0.0) || !std::isfinite(camera_height_)) {
    fail(ErrorCode::kDomain, "camera height must be positive");
  }
  if (!(ceiling_ratio_ > 0.0) || !std::isfinite(ceiling_ratio_)) {
    fail(ErrorCode::kDomain, "ceiling ratio must be positive");
  }
  if (corners_.size() < 4) {
    fail(ErrorCode::kDomain, "a room needs at least 4 corners, got " + std::to_string(corners_.size()));
  }
  for (const auto& p : corners_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.z)) fail(ErrorCode::kDomain, "non-finite corner");
  }
  if (!is_simple(corners_)) fail(ErrorCode::kGeometry, "floor polygon is not simple");
  if (signed_area(corners_) < 0.0) std::reverse(corners_.begin(), corners_.end());
  if (!strictly_contains(corners_, {0.0, 0.0})) {
    fail(ErrorCode::kGeometry, "camera is not strictly inside the floor polygon");
  }
}

double plane_height(Surface surface, double camera_height, double ceiling_ratio) {
  if (!(camera_height > 0.0) || !(ceiling_ratio > 0.0)) {
    fail(ErrorCode::kDomain, "camera height and ceiling ratio must be positive");
  }
  return surface == Surface::kFloor ? camera_height : -camera_height * ceiling_ratio;
}

Vec3 lift_point(const Vec3& unit, Surface surface, double camera_height, double ceiling_ratio) {
  const double height = plane_height(surface, camera_height, ceiling_ratio);
  if (std::abs(unit.y) < kDegenerateTol) {
    fail(ErrorCode::kDegenerate, "boundary ray is parallel to the " + std::string(to_string(surface)) + " plane");
  }
  return unit * (height / unit.y);
}

std::vector<Vec3> lift_to_plane(const BoundaryPointSet& points, double camera_height, double ceiling_ratio) {
  std::vector<Vec3> out;
  out.reserve(points.size());
  for (const auto& q : points.points()) {
    out.push_back(lift_point(spherical_to_cartesian(q), points.surface(), camera_height, ceiling_ratio));
  }
  return out;
}

namespace {

WallPlane plane_through(const Vec3& a, const Vec3& b, int ia, int ib) {
  if (norm(b - a) < kDegenerateTol) {
    fail(ErrorCode::kDegenerate,
         "boundary points " + std::to_string(ia) + " and " + std::to_string(ib) + " coincide");
  }
  WallPlane w;
  w.normal = cross(kUnitY, b - a);
  w.offset = -dot(w.normal, a);
  w.first_point = ia;
  w.second_point = ib;
  return w;
}

}  // namespace

std::vector<WallPlane> recover_wall_planes(std::span<const Vec3> lifted, std::span<const double> thetas) {
  const std::size_t n = lifted.size();
  if (n < 3) fail(ErrorCode::kDomain, "need at least 3 boundary points to recover walls");
  if (thetas.size() != n) fail(ErrorCode::kShape, "point and longitude counts differ");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(thetas[i] > thetas[i - 1])) {
      fail(ErrorCode::kDegenerate, "longitudes must be strictly ascending (index " + std::to_string(i) + ")");
    }
  }
  std::vector<WallPlane> walls;
  walls.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = (i + 1) % n;
    WallPlane w = plane_through(lifted[i], lifted[k], static_cast<int>(i), static_cast<int>(k));
    w.theta_lo = thetas[i];
    w.theta_hi = thetas[k];
    walls.push_back(w);
  }
  return walls;
}

std::vector<WallPlane> recover_polygon_walls(std::span<const Vec3> lifted) {
  const std::size_t n = lifted.size();
  if (n < 3) fail(ErrorCode::kDomain, "need at least 3 corners to recover walls");
  std::vector<double> thetas;
  thetas.reserve(n);
  for (const auto& p : lifted) thetas.push_back(cartesian_to_spherical(p).theta);

  std::vector<WallPlane> walls;
  walls.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = (i + 1) % n;
    WallPlane w = plane_through(lifted[i], lifted[k], static_cast<int>(i), static_cast<int>(k));
    // The edge subtends the shorter arc between its endpoints; orient the
    // arc by the sign of the horizontal cross product.
    const double turn = lifted[i].z * lifted[k].x - lifted[i].x * lifted[k].z;
    if (turn > 0.0) {
      w.theta_lo = thetas[i];
      w.theta_hi = thetas[k];
    } else if (turn < 0.0) {
      w.theta_lo = thetas[k];
      w.theta_hi = thetas[i];
    } else {
      w.theta_lo = w.theta_hi = thetas[i];  // seen edge-on
    }
    walls.push_back(w);
  }
  return walls;
}

std::vector<SphericalPoint> annotation_corner_directions(const LayoutAnnotation& a, Surface surface) {
  const double y = plane_height(surface, a.camera_height(), a.ceiling_ratio());
  std::vector<SphericalPoint> out;
  out.reserve(a.corners().size());
  for (const auto& c : a.corners()) out.push_back(cartesian_to_spherical({c.x, y, c.z}));
  return out;
}

BoundaryPair annotation_to_boundaries(const LayoutAnnotation& a) {
  std::vector<SphericalPoint> floor = annotation_corner_directions(a, Surface::kFloor);
  std::vector<SphericalPoint> ceiling = annotation_corner_directions(a, Surface::kCeiling);
  const std::size_t n = floor.size();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return floor[i].theta < floor[j].theta; });
  for (std::size_t m = 0; m < n; ++m) {
    const std::size_t i = order[m];
    const std::size_t k = order[(m + 1) % n];
    if (m + 1 < n && floor[i].theta == floor[k].theta) {
      fail(ErrorCode::kDegenerate,
           "corners " + std::to_string(i) + " and " + std::to_string(k) + " share a longitude");
    }
    // Ascending longitude walks the counter-clockwise corner list backwards
    // exactly when every corner is visible from the camera.
    if (k != (i + n - 1) % n) {
      fail(ErrorCode::kGeometry, "corner " + std::to_string(k) + " is occluded from the camera");
    }
  }

  std::vector<SphericalPoint> f, c;
  f.reserve(n);
  c.reserve(n);
  for (std::size_t i : order) {
    f.push_back(floor[i]);
    // Both are atan2(x, z); normalizing by different components can differ by an ulp.
    c.push_back({floor[i].theta, ceiling[i].phi});
  }
  return BoundaryPair(BoundaryPointSet(Surface::kFloor, std::move(f)),
                      BoundaryPointSet(Surface::kCeiling, std::move(c)));
}

ManhattanReport validate_manhattan(const LayoutAnnotation& a, double tol) {
  ManhattanReport report;
  const Polygon& poly = a.corners();
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const PlanPoint& p = poly[i];
    const PlanPoint& q = poly[(i + 1) % poly.size()];
    const double angle = std::atan2(q.z - p.z, q.x - p.x);
    double folded = std::fmod(std::abs(angle), kPi / 2);
    folded = std::min(folded, kPi / 2 - folded);
    report.deviations.push_back(folded);
    report.max_deviation = std::max(report.max_deviation, folded);
  }
  report.pass = report.max_deviation <= tol;
  return report;
}

}  // namespace hdk
