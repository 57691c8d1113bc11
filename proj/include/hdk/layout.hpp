#pragma once

// Layout representations and the lift from panorama boundary points to
// floor/ceiling planes and vertical wall planes.

#include <span>
#include <vector>

#include "hdk/polygon.hpp"
#include "hdk/sphere_geometry.hpp"

namespace hdk {

inline constexpr double kDefaultCameraHeight = 1.6;

/// Coincident-point and parallel-ray threshold.
inline constexpr double kDegenerateTol = 1e-9;

enum class Surface { kFloor, kCeiling };

const char* to_string(Surface surface);

/// N >= 3 boundary points of one surface, strictly ascending in canonical
/// longitude. Floor points lie below the horizon (phi > 0), ceiling points
/// above it (phi < 0).
class BoundaryPointSet {
 public:
  BoundaryPointSet(Surface surface, std::vector<SphericalPoint> points);

  Surface surface() const { return surface_; }
  std::span<const SphericalPoint> points() const { return points_; }
  const SphericalPoint& operator[](std::size_t i) const { return points_[i]; }
  std::size_t size() const { return points_.size(); }
  std::vector<double> longitudes() const;

 private:
  Surface surface_;
  std::vector<SphericalPoint> points_;
};

/// Floor and ceiling boundaries sampled at identical longitudes.
class BoundaryPair {
 public:
  BoundaryPair(BoundaryPointSet floor, BoundaryPointSet ceiling);

  /// Builds both sets from one longitude list and per-surface latitudes.
  static BoundaryPair from_latitudes(std::span<const double> thetas, std::span<const double> floor_phi,
                                     std::span<const double> ceiling_phi);

  const BoundaryPointSet& floor() const { return floor_; }
  const BoundaryPointSet& ceiling() const { return ceiling_; }
  const BoundaryPointSet& surface(Surface s) const { return s == Surface::kFloor ? floor_ : ceiling_; }
  std::size_t size() const { return floor_.size(); }

 private:
  BoundaryPointSet floor_;
  BoundaryPointSet ceiling_;
};

/// A vertical wall plane normal . p + offset = 0, valid over the longitude
/// arc [theta_lo, theta_hi). When theta_lo > theta_hi the arc crosses the
/// +-pi seam; when they are equal the arc is empty.
struct WallPlane {
  Vec3 normal;
  double offset = 0.0;
  double theta_lo = 0.0;
  double theta_hi = 0.0;
  int first_point = -1;   // index of the generating point at theta_lo side
  int second_point = -1;

  bool crosses_seam() const { return theta_lo > theta_hi; }
  bool contains(double theta) const;
  double arc_length() const;
};

/// Ground-truth room description. Corners are stored counter-clockwise in
/// the (x, z) plane (see signed_area); clockwise input is re-oriented.
class LayoutAnnotation {
 public:
  LayoutAnnotation(Polygon corners_xz, double camera_height, double ceiling_ratio);

  const Polygon& corners() const { return corners_; }
  double camera_height() const { return camera_height_; }
  double ceiling_ratio() const { return ceiling_ratio_; }
  /// Floor-to-ceiling distance, camera_height * (1 + ceiling_ratio).
  double room_height() const { return camera_height_ * (1.0 + ceiling_ratio_); }

 private:
  Polygon corners_;
  double camera_height_;
  double ceiling_ratio_;
};

/// Signed plane height for a surface: +h for the floor, -h*R for the ceiling.
double plane_height(Surface surface, double camera_height, double ceiling_ratio);

/// Scales a unit direction onto the floor (y = h) or ceiling (y = -h R).
Vec3 lift_point(const Vec3& unit, Surface surface, double camera_height, double ceiling_ratio);

std::vector<Vec3> lift_to_plane(const BoundaryPointSet& points, double camera_height, double ceiling_ratio);

/// Plane i passes through lifted points i and i+1 (wrapping), normal
/// y x (p[i+1] - p[i]), arc [theta[i], theta[i+1]).
std::vector<WallPlane> recover_wall_planes(std::span<const Vec3> lifted, std::span<const double> thetas);

/// Walls along the edges of a closed polygon given in its own vertex order.
/// Each arc is the angular extent of the edge as seen from the camera, so
/// arcs overlap where walls occlude one another.
std::vector<WallPlane> recover_polygon_walls(std::span<const Vec3> lifted);

/// Corner directions of an annotation on one surface, in polygon order.
std::vector<SphericalPoint> annotation_corner_directions(const LayoutAnnotation& a, Surface surface);

/// Boundary points of every corner, sorted by longitude. Requires every
/// corner to be visible from the camera (kGeometry otherwise).
BoundaryPair annotation_to_boundaries(const LayoutAnnotation& a);

struct ManhattanReport {
  std::vector<double> deviations;  // per edge, radians from the nearest axis
  double max_deviation = 0.0;
  bool pass = false;
};

/// Compares every wall against the x and z axes of the annotation frame.
ManhattanReport validate_manhattan(const LayoutAnnotation& a, double tol);

}  // namespace hdk
