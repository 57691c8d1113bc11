#include "hdk/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hdk/error.hpp"

namespace hdk {

void FitConfig::validate() const {
  if (n_points < 4) fail(ErrorCode::kDomain, "fit needs n_points >= 4");
  if (m_rays < 4) fail(ErrorCode::kDomain, "fit needs m_rays >= 4");
  if (max_iters < 0) fail(ErrorCode::kDomain, "max_iters must be non-negative");
  if (!(step_size > 0.0)) fail(ErrorCode::kDomain, "step_size must be positive");
  if (!(convergence_tol > 0.0)) fail(ErrorCode::kDomain, "convergence_tol must be positive");
  if (!(camera_height > 0.0)) fail(ErrorCode::kDomain, "camera_height must be positive");
  if (!(ceiling_ratio > 0.0)) fail(ErrorCode::kDomain, "ceiling_ratio must be positive");
}

namespace {

std::vector<double> grid_longitudes(int n) {
  std::vector<double> thetas(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) thetas[static_cast<std::size_t>(i)] = equiangular_longitude(i, n);
  return thetas;
}

BoundaryPair pair_from_depths(std::span<const double> thetas, std::span<const double> floor_depth,
                              std::span<const double> ceiling_depth, double camera_height, double ceiling_ratio) {
  std::vector<double> pf(thetas.size()), pc(thetas.size());
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    pf[i] = std::atan2(camera_height, floor_depth[i]);
    pc[i] = std::atan2(-camera_height * ceiling_ratio, ceiling_depth[i]);
  }
  return BoundaryPair::from_latitudes(thetas, pf, pc);
}

double median_of(std::span<const double> values) {
  std::vector<double> v(values.begin(), values.end());
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

}  // namespace

BoundaryPair square_boundary(int n_points, double median_depth, double camera_height, double ceiling_ratio) {
  if (n_points < 4) fail(ErrorCode::kDomain, "square boundary needs at least 4 points");
  if (!(median_depth > 0.0)) fail(ErrorCode::kDomain, "median depth must be positive");
  // The depth of a square with half-side s is s / max(|sin|, |cos|); its
  // median over longitude is s / cos(pi/8).
  const double half_side = median_depth * std::cos(kPi / 8);
  const auto thetas = grid_longitudes(n_points);
  std::vector<double> depth(thetas.size());
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    depth[i] = half_side / std::max(std::abs(std::sin(thetas[i])), std::abs(std::cos(thetas[i])));
  }
  return pair_from_depths(thetas, depth, depth, camera_height, ceiling_ratio);
}

BoundaryPair sample_boundary_pair(const LayoutAnnotation& a, int n_points) {
  const RayFan fan = make_ray_fan(n_points);
  const PairRender r = render_annotation(a, fan);
  return pair_from_depths(fan.longitudes(), r.floor.depth.values(), r.ceiling.depth.values(), a.camera_height(),
                          a.ceiling_ratio());
}

double estimate_ceiling_ratio(const BoundaryPair& pair) {
  double sum = 0.0;
  for (std::size_t i = 0; i < pair.size(); ++i) {
    const Vec3 f = spherical_to_cartesian(pair.floor()[i]);
    const Vec3 c = spherical_to_cartesian(pair.ceiling()[i]);
    if (std::abs(f.y) < kDegenerateTol || std::abs(c.y) < kDegenerateTol) {
      fail(ErrorCode::kDegenerate, "boundary point " + std::to_string(i) + " lies on the horizon");
    }
    // Both planes at unit distance: horizontal radius is |p_xz| / |p_y|.
    const double floor_radius = std::hypot(f.x, f.z) / std::abs(f.y);
    const double ceiling_radius = std::hypot(c.x, c.z) / std::abs(c.y);
    if (!(ceiling_radius > 0.0)) {
      fail(ErrorCode::kDegenerate, "ceiling boundary point " + std::to_string(i) + " is at the pole");
    }
    sum += floor_radius / ceiling_radius;
  }
  return sum / static_cast<double>(pair.size());
}

namespace {

struct Latitudes {
  std::vector<double> floor;
  std::vector<double> ceiling;
};

void project(Latitudes& lat) {
  const double lo = kLatitudeMargin;
  const double hi = kPi / 2 - kLatitudeMargin;
  for (double& p : lat.floor) p = std::clamp(p, lo, hi);
  for (double& p : lat.ceiling) p = std::clamp(p, -hi, -lo);
}

}  // namespace

namespace {

struct Evaluation {
  double loss = 0.0;
  Latitudes grad;
  Latitudes curvature;  // column sums of squared Jacobian entries
};

Evaluation evaluate(const BoundaryPair& pair, const HorizonDepthMap& target, double h, double ratio) {
  const RayFan& fan = target.fan();
  const PairRender rendered = render_pair(pair, h, ratio, fan);
  const PairJacobian jac = render_jacobian(pair, h, ratio, fan, rendered);
  const std::size_t n = pair.size();
  Evaluation ev;
  ev.loss = l1_loss(rendered.floor.depth, rendered.ceiling.depth, target);
  ev.grad.floor.assign(n, 0.0);
  ev.grad.ceiling.assign(n, 0.0);
  ev.curvature.floor.assign(n, 0.0);
  ev.curvature.ceiling.assign(n, 0.0);
  auto accumulate = [&](const DepthJacobian& J, const HorizonDepthMap& depth, std::vector<double>& g,
                        std::vector<double>& c) {
    for (int j = 0; j < target.m(); ++j) {
      const auto k = static_cast<std::size_t>(j);
      const double diff = depth[k] - target[k];
      const double s = static_cast<double>((diff > 0.0) - (diff < 0.0));
      for (const auto& e : J.row_entries[k]) {
        if (e.col >= static_cast<int>(n)) continue;
        g[static_cast<std::size_t>(e.col)] += s * e.value;
        c[static_cast<std::size_t>(e.col)] += e.value * e.value;
      }
    }
  };
  accumulate(jac.floor, rendered.floor.depth, ev.grad.floor, ev.curvature.floor);
  accumulate(jac.ceiling, rendered.ceiling.depth, ev.grad.ceiling, ev.curvature.ceiling);
  return ev;
}

}  // namespace

FitFailure::FitFailure(const std::string& message, std::vector<double> loss_trajectory)
    : Error(ErrorCode::kFitFailure, message), trajectory_(std::move(loss_trajectory)) {}

FitResult fit_layout(const HorizonDepthMap& target, const FitConfig& cfg, const std::optional<BoundaryPair>& init) {
  cfg.validate();
  if (target.m() != cfg.m_rays) {
    fail(ErrorCode::kShape, "target has " + std::to_string(target.m()) + " rays but m_rays is " +
                                std::to_string(cfg.m_rays));
  }
  const double h = cfg.camera_height;
  const double ratio = cfg.ceiling_ratio;
  const BoundaryPair start = init ? *init : square_boundary(cfg.n_points, median_of(target.values()), h, ratio);
  const std::vector<double> thetas = start.floor().longitudes();

  Latitudes current;
  for (std::size_t i = 0; i < start.size(); ++i) {
    current.floor.push_back(start.floor()[i].phi);
    current.ceiling.push_back(start.ceiling()[i].phi);
  }
  project(current);
  auto to_pair = [&](const Latitudes& lat) { return BoundaryPair::from_latitudes(thetas, lat.floor, lat.ceiling); };

  Evaluation ev = evaluate(to_pair(current), target, h, ratio);
  FitResult result{to_pair(current), {ev.loss}, ratio, false, 0};
  double step = cfg.step_size;

  // Gradient scaled by the Gauss-Newton diagonal, so a unit step moves each
  // boundary point about one meter of depth regardless of its distance.
  auto direction = [](double g, double c) { return c > 0.0 ? g / c : 0.0; };

  while (result.iterations < cfg.max_iters) {
    if (ev.loss == 0.0) {
      result.converged = true;
      break;
    }
    bool accepted = false;
    bool last_rejection_open = false;
    Latitudes trial;
    while (step >= kMinStep) {
      trial = current;
      for (std::size_t i = 0; i < thetas.size(); ++i) {
        trial.floor[i] -= step * direction(ev.grad.floor[i], ev.curvature.floor[i]);
        trial.ceiling[i] -= step * direction(ev.grad.ceiling[i], ev.curvature.ceiling[i]);
      }
      project(trial);
      try {
        const PairRender r = render_pair(to_pair(trial), h, ratio, target.fan());
        last_rejection_open = false;
        if (l1_loss(r.floor.depth, r.ceiling.depth, target) < ev.loss) {
          accepted = true;
          break;
        }
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kOpenLayout && e.code() != ErrorCode::kDegenerate &&
            e.code() != ErrorCode::kGeometry) {
          throw;
        }
        last_rejection_open = true;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (last_rejection_open) {
        std::ostringstream os;
        os << "step size underflow after " << result.iterations << " iterations (every trial step opened the layout)";
        throw FitFailure(os.str(), result.loss_trajectory);
      }
      // No step size decreases the loss: a stationary point of the L1 objective.
      result.converged = true;
      break;
    }
    const double previous = ev.loss;
    current = std::move(trial);
    ev = evaluate(to_pair(current), target, h, ratio);
    ++result.iterations;
    result.loss_trajectory.push_back(ev.loss);
    step = std::min(step * 2.0, cfg.step_size);
    if (previous - ev.loss < cfg.convergence_tol) {
      result.converged = true;
      break;
    }
  }
  result.boundary = to_pair(current);
  result.ceiling_ratio = estimate_ceiling_ratio(result.boundary);
  return result;
}

}  // namespace hdk
