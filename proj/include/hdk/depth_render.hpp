#pragma once

// Horizon-depth rendering: ray/wall candidate depths, occlusion min, the L1
// objective and analytic derivatives of rendered depth with respect to the
// boundary coordinates.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hdk/layout.hpp"
#include "hdk/sphere_geometry.hpp"

namespace hdk {

/// Candidates closer than this are treated as ties; the lower wall index wins.
inline constexpr double kTieTol = 1e-12;
/// Rays with |u . n| below this are treated as parallel to the wall.
inline constexpr double kParallelTol = 1e-12;

/// Depths along the rays of an equiangular fan.
class HorizonDepthMap {
 public:
  /// Values must be finite and positive; the fan is make_ray_fan(values.size()).
  explicit HorizonDepthMap(std::vector<double> values);

  int m() const { return static_cast<int>(values_.size()); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t j) const { return values_[j]; }
  const RayFan& fan() const { return fan_; }

 private:
  std::vector<double> values_;
  RayFan fan_;
};

struct RayRecord {
  int active_wall = -1;
  int candidate_count = 0;
  double active_depth = 0.0;
};

/// Per-ray argmin bookkeeping of a render, tagged with a hash of the walls
/// and fan that produced it.
struct RenderTrace {
  std::vector<RayRecord> rays;
  std::uint64_t input_hash = 0;
};

struct RenderResult {
  HorizonDepthMap depth;
  RenderTrace trace;
};

struct PairRender {
  RenderResult floor;
  RenderResult ceiling;
};

/// Depth at which a unit ray meets the wall, if the hit lies in front of the
/// camera and inside the wall's longitude arc.
std::optional<double> candidate_depth(const Vec3& ray, const WallPlane& wall);
/// Same, with the ray longitude supplied by the caller.
std::optional<double> candidate_depth(const Vec3& ray, double ray_theta, const WallPlane& wall);

std::uint64_t hash_render_inputs(std::span<const WallPlane> walls, const RayFan& fan);

/// Nearest surviving candidate per ray. Throws kOpenLayout if a ray has none.
RenderResult render(std::span<const WallPlane> walls, const RayFan& fan);

/// lift_to_plane -> recover_wall_planes -> render, per surface.
PairRender render_pair(const BoundaryPair& pair, double camera_height, double ceiling_ratio, const RayFan& fan);

/// Renders an annotation directly from its polygon walls, so corners hidden
/// behind other walls are handled by the occlusion min.
PairRender render_annotation(const LayoutAnnotation& a, const RayFan& fan);

struct ApproximationError {
  double max_abs = 0.0;
  double mean_abs = 0.0;
};

/// Samples the room's floor depth at m rays, rebuilds the boundary from those
/// samples alone and renders it on the reference fan; the error is against
/// the annotation rendered on the same fan.
ApproximationError ray_count_error(const LayoutAnnotation& a, int m, const HorizonDepthMap& reference);

enum class Reduction { kSum, kMean };

/// ||floor - target||_1 + ||ceiling - target||_1; kMean divides by M.
double l1_loss(const HorizonDepthMap& floor, const HorizonDepthMap& ceiling, const HorizonDepthMap& target,
               Reduction reduction = Reduction::kSum);

/// Sparse M x 2N matrix. Column i < N is d/d phi_i, column N + i is d/d theta_i.
struct DepthJacobian {
  struct Entry {
    int col = 0;
    double value = 0.0;
  };

  int rows = 0;
  int cols = 0;
  std::vector<std::vector<Entry>> row_entries;

  double at(int row, int col) const;
};

struct PairJacobian {
  DepthJacobian floor;
  DepthJacobian ceiling;
};

/// Derivatives of every rendered depth with the active wall of each ray held
/// fixed. Throws kConsistency if the traces were rendered from other inputs.
PairJacobian render_jacobian(const BoundaryPair& pair, double camera_height, double ceiling_ratio, const RayFan& fan,
                             const PairRender& traces);

struct LossGradient {
  double loss = 0.0;
  std::vector<double> floor_phi;
  std::vector<double> ceiling_phi;
  std::vector<double> theta;  // shared longitudes; empty unless requested
};

LossGradient loss_gradient(const BoundaryPair& pair, const HorizonDepthMap& target, double camera_height,
                           double ceiling_ratio, Reduction reduction = Reduction::kSum,
                           bool with_longitudes = false);

}  // namespace hdk
