#pragma once

// Coordinate frames for equirectangular panoramas.
//
// Cartesian frame: y is vertical and points toward the floor; z is the
// forward direction (longitude 0); x is longitude +pi/2. A direction with
// longitude theta and latitude phi is
//   (cos phi sin theta, sin phi, cos phi cos theta),
// so floor directions have phi > 0 and ceiling directions phi < 0.

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace hdk {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend constexpr Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend constexpr Vec3 operator*(const Vec3& a, double s) { return {a.x * s, a.y * s, a.z * s}; }
  friend constexpr Vec3 operator*(double s, const Vec3& a) { return a * s; }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// Vertical axis, pointing toward the floor.
inline constexpr Vec3 kUnitY{0.0, 1.0, 0.0};

struct SphericalPoint {
  double theta = 0.0;  // longitude, [-pi, pi]
  double phi = 0.0;    // latitude, [-pi/2, pi/2]

  friend constexpr bool operator==(const SphericalPoint&, const SphericalPoint&) = default;
};

/// Throws kDomain if q is outside [-pi, pi] x [-pi/2, pi/2] or not finite.
void check_range(const SphericalPoint& q);

/// Maps any finite longitude to the canonical interval [-pi, pi).
double canonical_longitude(double theta);

Vec3 spherical_to_cartesian(const SphericalPoint& q);

/// Inverse of spherical_to_cartesian for any nonzero vector. The result is
/// invariant under exact positive scaling of p (the vector is normalized by
/// its largest component first, which is a correctly rounded division).
/// theta is canonical; at the poles theta is 0.
SphericalPoint cartesian_to_spherical(const Vec3& p);

/// Pixel-center convention on a 2:1 equirectangular image. Row 0 is the top
/// of the image (ceiling side), so latitude grows downward toward the floor.
SphericalPoint pixel_to_spherical(double x, double y, int width, int height);
std::array<double, 2> spherical_to_pixel(const SphericalPoint& q, int width, int height);

/// M horizontal rays with equiangular longitudes -pi + j * 2pi / M.
class RayFan {
 public:
  explicit RayFan(int count);

  int count() const { return static_cast<int>(longitudes_.size()); }
  std::span<const double> longitudes() const { return longitudes_; }
  std::span<const Vec3> directions() const { return directions_; }
  double longitude(int j) const { return longitudes_[static_cast<std::size_t>(j)]; }
  const Vec3& direction(int j) const { return directions_[static_cast<std::size_t>(j)]; }

 private:
  std::vector<double> longitudes_;
  std::vector<Vec3> directions_;
};

/// Throws kDomain for M < 4.
RayFan make_ray_fan(int count);

/// Longitude of the j-th of n equiangular samples, -pi + j * 2pi / n.
double equiangular_longitude(int j, int n);

}  // namespace hdk
