#include "hdk/depth_render.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>

#include "hdk/error.hpp"

namespace hdk {

namespace {

std::vector<double> checked_depths(std::vector<double> values) {
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (!std::isfinite(values[j]) || !(values[j] > 0.0)) {
      std::ostringstream os;
      os << "depth " << j << " is " << values[j] << "; horizon depths must be finite and positive";
      fail(ErrorCode::kDomain, os.str());
    }
  }
  return values;
}

class Fnv1a {
 public:
  void add(double v) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &v, sizeof v);
    for (unsigned char b : bytes) {
      state_ ^= b;
      state_ *= 0x100000001b3ULL;
    }
  }
  std::uint64_t value() const { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::vector<double> longitudes_of(const BoundaryPointSet& points) { return points.longitudes(); }

std::vector<WallPlane> boundary_walls(const BoundaryPointSet& points, double camera_height, double ceiling_ratio) {
  const std::vector<Vec3> lifted = lift_to_plane(points, camera_height, ceiling_ratio);
  return recover_wall_planes(lifted, longitudes_of(points));
}

}  // namespace

HorizonDepthMap::HorizonDepthMap(std::vector<double> values)
    : values_(checked_depths(std::move(values))), fan_(static_cast<int>(values_.size())) {}

std::optional<double> candidate_depth(const Vec3& ray, double ray_theta, const WallPlane& wall) {
  const double facing = dot(ray, wall.normal);
  if (std::abs(facing) < kParallelTol) return std::nullopt;
  const double depth = -wall.offset / facing;
  if (!(depth >= 0.0)) return std::nullopt;
  // A hit in front of the camera has the longitude of the ray itself.
  if (!wall.contains(ray_theta)) return std::nullopt;
  return depth;
}

std::optional<double> candidate_depth(const Vec3& ray, const WallPlane& wall) {
  return candidate_depth(ray, cartesian_to_spherical(ray).theta, wall);
}

std::uint64_t hash_render_inputs(std::span<const WallPlane> walls, const RayFan& fan) {
  Fnv1a h;
  h.add(static_cast<double>(fan.count()));
  for (const auto& w : walls) {
    h.add(w.normal.x);
    h.add(w.normal.y);
    h.add(w.normal.z);
    h.add(w.offset);
    h.add(w.theta_lo);
    h.add(w.theta_hi);
    h.add(static_cast<double>(w.first_point));
    h.add(static_cast<double>(w.second_point));
  }
  return h.value();
}

RenderResult render(std::span<const WallPlane> walls, const RayFan& fan) {
  const int m = fan.count();
  std::vector<double> depths(static_cast<std::size_t>(m));
  RenderTrace trace;
  trace.rays.resize(static_cast<std::size_t>(m));
  trace.input_hash = hash_render_inputs(walls, fan);

  for (int j = 0; j < m; ++j) {
    const Vec3& ray = fan.direction(j);
    const double theta = fan.longitude(j);
    RayRecord& rec = trace.rays[static_cast<std::size_t>(j)];
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < walls.size(); ++i) {
      const auto d = candidate_depth(ray, theta, walls[i]);
      if (!d) continue;
      ++rec.candidate_count;
      if (rec.active_wall < 0 || *d < best - kTieTol) {
        best = *d;
        rec.active_wall = static_cast<int>(i);
      }
    }
    if (rec.active_wall < 0) {
      std::ostringstream os;
      os.precision(17);
      os << "no wall covers the ray at longitude " << theta << " (ray " << j << " of " << m << ")";
      fail(ErrorCode::kOpenLayout, os.str());
    }
    if (!(best > 0.0)) {
      fail(ErrorCode::kGeometry, "camera lies on wall " + std::to_string(rec.active_wall));
    }
    rec.active_depth = best;
    depths[static_cast<std::size_t>(j)] = best;
  }
  return {HorizonDepthMap(std::move(depths)), std::move(trace)};
}

PairRender render_pair(const BoundaryPair& pair, double camera_height, double ceiling_ratio, const RayFan& fan) {
  const auto floor_walls = boundary_walls(pair.floor(), camera_height, ceiling_ratio);
  const auto ceiling_walls = boundary_walls(pair.ceiling(), camera_height, ceiling_ratio);
  return {render(floor_walls, fan), render(ceiling_walls, fan)};
}

PairRender render_annotation(const LayoutAnnotation& a, const RayFan& fan) {
  auto surface_walls = [&](Surface s) {
    std::vector<Vec3> lifted;
    for (const auto& q : annotation_corner_directions(a, s)) {
      lifted.push_back(lift_point(spherical_to_cartesian(q), s, a.camera_height(), a.ceiling_ratio()));
    }
    return recover_polygon_walls(lifted);
  };
  const auto floor_walls = surface_walls(Surface::kFloor);
  const auto ceiling_walls = surface_walls(Surface::kCeiling);
  return {render(floor_walls, fan), render(ceiling_walls, fan)};
}

double l1_loss(const HorizonDepthMap& floor, const HorizonDepthMap& ceiling, const HorizonDepthMap& target,
               Reduction reduction) {
  if (floor.m() != target.m() || ceiling.m() != target.m()) {
    fail(ErrorCode::kShape, "depth maps have different ray counts");
  }
  double total = 0.0;
  for (int j = 0; j < target.m(); ++j) {
    const auto k = static_cast<std::size_t>(j);
    total += std::abs(floor[k] - target[k]) + std::abs(ceiling[k] - target[k]);
  }
  return reduction == Reduction::kMean ? total / target.m() : total;
}

double DepthJacobian::at(int row, int col) const {
  for (const auto& e : row_entries[static_cast<std::size_t>(row)]) {
    if (e.col == col) return e.value;
  }
  return 0.0;
}

namespace {

// d(lifted x, z) / d(phi, theta) for a boundary point on a plane at signed
// height c: (x, z) = c cot(phi) (sin theta, cos theta).
struct PointPartials {
  double x_phi, z_phi, x_theta, z_theta;
};

PointPartials point_partials(const SphericalPoint& q, double c) {
  const double s = std::sin(q.phi);
  const double cot = std::cos(q.phi) / s;
  const double csc2 = 1.0 / (s * s);
  const double st = std::sin(q.theta);
  const double ct = std::cos(q.theta);
  return {-c * csc2 * st, -c * csc2 * ct, c * cot * ct, -c * cot * st};
}

DepthJacobian surface_jacobian(const BoundaryPointSet& points, double camera_height, double ceiling_ratio,
                               const RayFan& fan, const RenderResult& rendered) {
  const auto lifted = lift_to_plane(points, camera_height, ceiling_ratio);
  const auto walls = recover_wall_planes(lifted, points.longitudes());
  if (rendered.trace.rays.size() != static_cast<std::size_t>(fan.count()) ||
      rendered.trace.input_hash != hash_render_inputs(walls, fan)) {
    fail(ErrorCode::kConsistency,
         std::string("render trace does not match the ") + to_string(points.surface()) + " boundary");
  }
  const double c = plane_height(points.surface(), camera_height, ceiling_ratio);
  const int n = static_cast<int>(points.size());

  DepthJacobian jac;
  jac.rows = fan.count();
  jac.cols = 2 * n;
  jac.row_entries.resize(static_cast<std::size_t>(fan.count()));
  for (int j = 0; j < fan.count(); ++j) {
    const RayRecord& rec = rendered.trace.rays[static_cast<std::size_t>(j)];
    const WallPlane& w = walls[static_cast<std::size_t>(rec.active_wall)];
    const Vec3& a = lifted[static_cast<std::size_t>(w.first_point)];
    const Vec3& b = lifted[static_cast<std::size_t>(w.second_point)];
    const Vec3& u = fan.direction(j);
    // d = (a_x b_z - a_z b_x) / (u_x (b_z - a_z) - u_z (b_x - a_x))
    const double den = u.x * (b.z - a.z) - u.z * (b.x - a.x);
    const double d = rec.active_depth;
    const double dax = (b.z - d * u.z) / den;
    const double daz = (-b.x + d * u.x) / den;
    const double dbx = (-a.z + d * u.z) / den;
    const double dbz = (a.x - d * u.x) / den;

    const PointPartials pa = point_partials(points[static_cast<std::size_t>(w.first_point)], c);
    const PointPartials pb = point_partials(points[static_cast<std::size_t>(w.second_point)], c);
    auto& row = jac.row_entries[static_cast<std::size_t>(j)];
    row = {
        {w.first_point, dax * pa.x_phi + daz * pa.z_phi},
        {w.second_point, dbx * pb.x_phi + dbz * pb.z_phi},
        {n + w.first_point, dax * pa.x_theta + daz * pa.z_theta},
        {n + w.second_point, dbx * pb.x_theta + dbz * pb.z_theta},
    };
    std::sort(row.begin(), row.end(), [](const auto& l, const auto& r) { return l.col < r.col; });
  }
  return jac;
}

double sign_of(double v) { return static_cast<double>((v > 0.0) - (v < 0.0)); }

}  // namespace

PairJacobian render_jacobian(const BoundaryPair& pair, double camera_height, double ceiling_ratio, const RayFan& fan,
                             const PairRender& traces) {
  return {surface_jacobian(pair.floor(), camera_height, ceiling_ratio, fan, traces.floor),
          surface_jacobian(pair.ceiling(), camera_height, ceiling_ratio, fan, traces.ceiling)};
}

LossGradient loss_gradient(const BoundaryPair& pair, const HorizonDepthMap& target, double camera_height,
                           double ceiling_ratio, Reduction reduction, bool with_longitudes) {
  const RayFan& fan = target.fan();
  const PairRender rendered = render_pair(pair, camera_height, ceiling_ratio, fan);
  const PairJacobian jac = render_jacobian(pair, camera_height, ceiling_ratio, fan, rendered);
  const int n = static_cast<int>(pair.size());
  const double scale = reduction == Reduction::kMean ? 1.0 / target.m() : 1.0;

  LossGradient g;
  g.loss = l1_loss(rendered.floor.depth, rendered.ceiling.depth, target, reduction);
  g.floor_phi.assign(static_cast<std::size_t>(n), 0.0);
  g.ceiling_phi.assign(static_cast<std::size_t>(n), 0.0);
  std::vector<double> theta(static_cast<std::size_t>(n), 0.0);

  auto accumulate = [&](const DepthJacobian& J, const HorizonDepthMap& depth, std::vector<double>& phi_grad) {
    for (int j = 0; j < target.m(); ++j) {
      const auto k = static_cast<std::size_t>(j);
      const double s = sign_of(depth[k] - target[k]) * scale;
      if (s == 0.0) continue;
      for (const auto& e : J.row_entries[k]) {
        if (e.col < n) {
          phi_grad[static_cast<std::size_t>(e.col)] += s * e.value;
        } else {
          theta[static_cast<std::size_t>(e.col - n)] += s * e.value;
        }
      }
    }
  };
  accumulate(jac.floor, rendered.floor.depth, g.floor_phi);
  accumulate(jac.ceiling, rendered.ceiling.depth, g.ceiling_phi);
  if (with_longitudes) g.theta = std::move(theta);
  return g;
}

ApproximationError ray_count_error(const LayoutAnnotation& a, int m, const HorizonDepthMap& reference) {
  const double h = a.camera_height();
  const double ratio = a.ceiling_ratio();
  const RayFan fan = make_ray_fan(m);
  const HorizonDepthMap coarse = render_annotation(a, fan).floor.depth;
  std::vector<double> fp(static_cast<std::size_t>(m)), cp(static_cast<std::size_t>(m));
  for (std::size_t j = 0; j < fp.size(); ++j) {
    fp[j] = std::atan2(h, coarse[j]);
    cp[j] = std::atan2(-h * ratio, coarse[j]);
  }
  const BoundaryPair pair = BoundaryPair::from_latitudes(fan.longitudes(), fp, cp);
  const HorizonDepthMap approx = render_pair(pair, h, ratio, reference.fan()).floor.depth;
  ApproximationError e;
  for (std::size_t j = 0; j < reference.values().size(); ++j) {
    const double d = std::abs(approx[j] - reference[j]);
    e.max_abs = std::max(e.max_abs, d);
    e.mean_abs += d;
  }
  e.mean_abs /= static_cast<double>(reference.m());
  return e;
}

}  // namespace hdk
