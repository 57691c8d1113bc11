#pragma once

// Recovering a layout from a target horizon-depth map by gradient descent on
// boundary latitudes, plus inference-time ceiling-ratio estimation and
// Manhattan snapping of the recovered boundary.

#include <cstdint>
#include <optional>
#include <vector>

#include "hdk/depth_render.hpp"
#include "hdk/error.hpp"
#include "hdk/layout.hpp"

namespace hdk {

/// Latitudes stay this far from the poles and from the horizon.
inline constexpr double kLatitudeMargin = 1e-3;
/// Backtracking gives up once the step falls below this.
inline constexpr double kMinStep = 1e-12;

struct FitConfig {
  int n_points = 256;
  int m_rays = 256;
  int max_iters = 2000;
  double step_size = 5.0;  // cap on the preconditioned step, roughly meters of depth
  double convergence_tol = 1e-9;  // minimum loss decrease per accepted step
  std::uint64_t seed = 0;
  double camera_height = kDefaultCameraHeight;
  double ceiling_ratio = 1.0;

  void validate() const;
};

struct FitResult {
  BoundaryPair boundary;
  std::vector<double> loss_trajectory;  // loss after every accepted step, starting with the initial loss
  double ceiling_ratio = 1.0;
  bool converged = false;
  int iterations = 0;
};

/// Boundary of an axis-aligned square room around the camera, sampled at n
/// equiangular longitudes, whose median horizon depth is median_depth.
BoundaryPair square_boundary(int n_points, double median_depth, double camera_height, double ceiling_ratio);

/// Boundary of an annotated room sampled at n equiangular longitudes (visible
/// depth per longitude, so occluded corners are resolved).
BoundaryPair sample_boundary_pair(const LayoutAnnotation& a, int n_points);

/// kFitFailure carrying the losses reached before the step size underflowed.
class FitFailure : public Error {
 public:
  FitFailure(const std::string& message, std::vector<double> loss_trajectory);

  const std::vector<double>& loss_trajectory() const noexcept { return trajectory_; }

 private:
  std::vector<double> trajectory_;
};

FitResult fit_layout(const HorizonDepthMap& target, const FitConfig& cfg,
                     const std::optional<BoundaryPair>& init = std::nullopt);

/// Mean over boundary points of the floor/ceiling horizontal-distance ratio
/// with both planes at unit distance.
double estimate_ceiling_ratio(const BoundaryPair& pair);

struct SnapConfig {
  double corner_angle = kPi / 4;  // direction change that starts a new wall
  double collinear_tol = 0.05;    // meters; adjacent parallel walls closer than this merge
  double chord_arc = 0.075;       // longitude spanned by a direction chord, radians
  double min_run_arc = 0.075;     // shorter runs are absorbed into their neighbours
  double split_ratio = 0.12;      // in-run jump, relative to depth, that splits a wall
  int histogram_bins = 90;
};

struct SnapResult {
  LayoutAnnotation annotation;
  double rotation = 0.0;  // dominant wall direction, radians in [0, pi/2)
};

SnapResult manhattan_snap_detailed(const BoundaryPair& pair, double ceiling_ratio,
                                   double camera_height = kDefaultCameraHeight, const SnapConfig& cfg = {});

/// Axis-aligned room polygon fitted to the floor boundary. Throws
/// kSnapFailure when fewer than 4 walls are found.
LayoutAnnotation manhattan_snap(const BoundaryPair& pair, double ceiling_ratio,
                                double camera_height = kDefaultCameraHeight, const SnapConfig& cfg = {});

}  // namespace hdk
