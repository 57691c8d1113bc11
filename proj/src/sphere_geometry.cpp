#include "hdk/sphere_geometry.hpp"

#include <algorithm>
#include <sstream>

#include "hdk/error.hpp"

namespace hdk {

void check_range(const SphericalPoint& q) {
  if (!std::isfinite(q.theta) || !std::isfinite(q.phi) || q.theta < -kPi || q.theta > kPi ||
      q.phi < -kPi / 2 || q.phi > kPi / 2) {
    std::ostringstream os;
    os << "spherical point (theta=" << q.theta << ", phi=" << q.phi << ") out of range";
    fail(ErrorCode::kDomain, os.str());
  }
}

double canonical_longitude(double theta) {
  if (!std::isfinite(theta)) fail(ErrorCode::kDomain, "non-finite longitude");
  if (theta >= -kPi && theta < kPi) return theta;
  if (theta == kPi) return -kPi;
  double wrapped = std::remainder(theta, kTwoPi);  // [-pi, pi]
  if (wrapped >= kPi) wrapped = -kPi;
  return wrapped;
}

Vec3 spherical_to_cartesian(const SphericalPoint& q) {
  check_range(q);
  const double c = std::cos(q.phi);
  return {c * std::sin(q.theta), std::sin(q.phi), c * std::cos(q.theta)};
}

SphericalPoint cartesian_to_spherical(const Vec3& p) {
  const double scale = std::max({std::abs(p.x), std::abs(p.y), std::abs(p.z)});
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    fail(ErrorCode::kDomain, "cannot take the direction of a zero or non-finite vector");
  }
  const double x = p.x / scale;
  const double y = p.y / scale;
  const double z = p.z / scale;
  const double horizontal = std::hypot(x, z);
  SphericalPoint q;
  q.phi = std::atan2(y, horizontal);
  if (horizontal == 0.0) {
    q.theta = 0.0;
  } else {
    q.theta = std::atan2(x, z);
    if (q.theta >= kPi) q.theta = -kPi;
  }
  return q;
}

namespace {

void check_equirect_shape(int width, int height) {
  if (width <= 0 || height <= 0 || width != 2 * height) {
    std::ostringstream os;
    os << "equirectangular image must be 2:1, got " << width << "x" << height;
    fail(ErrorCode::kFormat, os.str());
  }
}

}  // namespace

SphericalPoint pixel_to_spherical(double x, double y, int width, int height) {
  check_equirect_shape(width, height);
  if (!(x >= 0.0 && x < width && y >= 0.0 && y < height)) {
    std::ostringstream os;
    os << "pixel (" << x << ", " << y << ") outside " << width << "x" << height << " image";
    fail(ErrorCode::kDomain, os.str());
  }
  SphericalPoint q;
  q.theta = canonical_longitude((2.0 * (x + 0.5) / width - 1.0) * kPi);
  // The last half row lies past the pole.
  q.phi = std::min(((y + 0.5) / height - 0.5) * kPi, kPi / 2);
  return q;
}

std::array<double, 2> spherical_to_pixel(const SphericalPoint& q, int width, int height) {
  check_equirect_shape(width, height);
  check_range(q);
  double x = (q.theta / kPi + 1.0) * width / 2.0 - 0.5;
  if (x < 0.0) x += width;
  return {x, (q.phi / kPi + 0.5) * height - 0.5};
}

double equiangular_longitude(int j, int n) { return -kPi + (kTwoPi * j) / n; }

RayFan::RayFan(int count) {
  if (count < 4) fail(ErrorCode::kDomain, "a ray fan needs at least 4 rays, got " + std::to_string(count));
  longitudes_.reserve(static_cast<std::size_t>(count));
  directions_.reserve(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) {
    const double theta = equiangular_longitude(j, count);
    longitudes_.push_back(theta);
    directions_.push_back({std::sin(theta), 0.0, std::cos(theta)});
  }
}

RayFan make_ray_fan(int count) { return RayFan(count); }

}  // namespace hdk
