#include <algorithm>
#include <cmath>
#include <numeric>

#include "hdk/error.hpp"
#include "hdk/fitting.hpp"

namespace hdk {

namespace {

enum class Axis { kX, kZ };  // kX: wall runs along x (z is constant)

Axis other(Axis a) { return a == Axis::kX ? Axis::kZ : Axis::kX; }

double fold_quarter(double angle) {
  double a = std::fmod(angle, kPi / 2);
  if (a < 0.0) a += kPi / 2;
  if (a >= kPi / 2) a = 0.0;
  return a;
}

// Number of boundary points covering the given longitude span.
long points_in(double arc, std::size_t n) {
  return std::max(1L, std::lround(arc * static_cast<double>(n) / kTwoPi));
}

std::size_t wrap(long i, std::size_t n) {
  const long m = static_cast<long>(n);
  return static_cast<std::size_t>(((i % m) + m) % m);
}

// Length-weighted dominant wall direction modulo pi/2.
double dominant_direction(const std::vector<PlanPoint>& pts, int chord, int bins) {
  const std::size_t n = pts.size();
  std::vector<double> angle(n), weight(n);
  std::vector<double> hist(static_cast<std::size_t>(bins), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const PlanPoint& a = pts[i];
    const PlanPoint& b = pts[(i + static_cast<std::size_t>(chord)) % n];
    angle[i] = fold_quarter(std::atan2(b.z - a.z, b.x - a.x));
    weight[i] = std::hypot(b.x - a.x, b.z - a.z);
    const auto bin = std::min(static_cast<std::size_t>(angle[i] / (kPi / 2) * bins), hist.size() - 1);
    hist[bin] += weight[i];
  }
  const auto peak = static_cast<std::size_t>(std::max_element(hist.begin(), hist.end()) - hist.begin());
  const double center = (static_cast<double>(peak) + 0.5) * (kPi / 2) / bins;

  // Weighted median of the signed offsets from the peak, over chords near it.
  std::vector<std::pair<double, double>> near;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double d = angle[i] - center;
    if (d > kPi / 4) d -= kPi / 2;
    if (d <= -kPi / 4) d += kPi / 2;
    if (std::abs(d) > kPi / 8) continue;
    near.emplace_back(d, weight[i]);
    total += weight[i];
  }
  std::sort(near.begin(), near.end());
  double acc = 0.0;
  for (const auto& [d, w] : near) {
    acc += w;
    if (acc >= 0.5 * total) return fold_quarter(center + d);
  }
  return fold_quarter(center);
}

struct Wall {
  Axis axis = Axis::kX;
  double coord = 0.0;
  std::vector<std::size_t> support;  // point indices, boundary order
};

double along(const PlanPoint& p, Axis axis) { return axis == Axis::kX ? p.z : p.x; }
double across(const PlanPoint& p, Axis axis) { return axis == Axis::kX ? p.x : p.z; }

// Robust depth-weighted wall coordinate: median/MAD gate, then weighted mean.
bool fit_wall(const std::vector<std::size_t>& idx, Axis axis, const std::vector<PlanPoint>& pts,
              const std::vector<double>& depth, Wall& out) {
  if (idx.empty()) return false;
  std::vector<double> v;
  v.reserve(idx.size());
  for (std::size_t i : idx) v.push_back(along(pts[i], axis));
  std::vector<double> sorted = v;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(sorted.size() / 2), sorted.end());
  const double median = sorted[sorted.size() / 2];
  std::vector<double> dev;
  dev.reserve(v.size());
  for (double x : v) dev.push_back(std::abs(x - median));
  std::vector<double> dev_sorted = dev;
  std::nth_element(dev_sorted.begin(), dev_sorted.begin() + static_cast<long>(dev_sorted.size() / 2),
                   dev_sorted.end());
  const double mad = dev_sorted[dev_sorted.size() / 2];
  const double gate = std::max(3.0 * 1.4826 * mad, 1e-9 * (1.0 + std::abs(median)));

  out.axis = axis;
  out.support.clear();
  double wsum = 0.0, vsum = 0.0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (dev[k] > gate) continue;
    out.support.push_back(idx[k]);
    wsum += depth[idx[k]];
    vsum += depth[idx[k]] * v[k];
  }
  if (out.support.empty()) return false;
  out.coord = vsum / wsum;
  return true;
}

Wall merged(const Wall& a, const Wall& b, const std::vector<PlanPoint>& pts, const std::vector<double>& depth) {
  Wall w;
  std::vector<std::size_t> idx = a.support;
  idx.insert(idx.end(), b.support.begin(), b.support.end());
  w.axis = a.axis;
  w.support = idx;
  double wsum = 0.0, vsum = 0.0;
  for (std::size_t i : idx) {
    wsum += depth[i];
    vsum += depth[i] * along(pts[i], a.axis);
  }
  w.coord = vsum / wsum;
  return w;
}

// Mean squared distance of the points strictly between pts[i] and pts[j]
// from the chord joining them, relative to the squared chord length.
double chord_residual(const std::vector<PlanPoint>& pts, long i, long j) {
  const std::size_t n = pts.size();
  const PlanPoint& a = pts[wrap(i, n)];
  const PlanPoint& b = pts[wrap(j, n)];
  const double dx = b.x - a.x, dz = b.z - a.z;
  const double len2 = dx * dx + dz * dz;
  if (!(len2 > 0.0)) return kPi;
  double sum = 0.0;
  for (long k = i + 1; k < j; ++k) {
    const PlanPoint& p = pts[wrap(k, n)];
    const double cross = dx * (p.z - a.z) - dz * (p.x - a.x);
    sum += cross * cross / len2;
  }
  return sum / len2 / static_cast<double>(std::max(1L, j - i - 1));
}

// Labels every point with the axis of the wall it belongs to, switching
// axis whenever the local chord turns more than corner_angle away from the
// current one. Near a corner the centred chord straddles two walls, so each
// point takes the straightest of several chords through it.
// Returns labels and the index the walk started from.
std::vector<Axis> label_points(const std::vector<PlanPoint>& pts, const std::vector<double>& depth,
                               const SnapConfig& cfg, std::size_t& start) {
  const std::size_t n = pts.size();
  const long k = points_in(cfg.chord_arc, n);
  // jumps_before[i]: occlusion jumps between consecutive points up to i.
  std::vector<long> jumps_before(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const PlanPoint& a = pts[i];
    const PlanPoint& b = pts[(i + 1) % n];
    const bool jump = std::hypot(b.x - a.x, b.z - a.z) > cfg.split_ratio * std::min(depth[i], depth[(i + 1) % n]);
    jumps_before[i + 1] = jumps_before[i] + jump;
  }
  auto crosses_jump = [&](long a, long b) {
    long count = 0;
    for (long i = a; i < b; ++i) count += jumps_before[wrap(i, n) + 1] - jumps_before[wrap(i, n)];
    return count > 0;
  };
  std::vector<double> tilt(n);  // angle to the x axis folded into [0, pi/2]
  const long half = std::max(1L, k / 2);
  for (std::size_t i = 0; i < n; ++i) {
    const long c = static_cast<long>(i);
    long lo = c - k, hi = c + k;
    double best_residual = crosses_jump(lo, hi) ? kPi : chord_residual(pts, lo, hi);
    for (const auto& [a, b] : {std::pair{c - 2 * k, c}, std::pair{c, c + 2 * k}, std::pair{c - half, c + half},
                               std::pair{c - k, c}, std::pair{c, c + k}}) {
      if (crosses_jump(a, b)) continue;
      const double r = chord_residual(pts, a, b);
      if (r < best_residual) {
        best_residual = r;
        lo = a;
        hi = b;
      }
    }
    const PlanPoint& a = pts[wrap(lo, n)];
    const PlanPoint& b = pts[wrap(hi, n)];
    tilt[i] = std::atan2(std::abs(b.z - a.z), std::abs(b.x - a.x));
  }
  start = 0;
  double best = kPi;
  for (std::size_t i = 0; i < n; ++i) {
    const double dev = std::min(tilt[i], kPi / 2 - tilt[i]);
    if (dev < best) {
      best = dev;
      start = i;
    }
  }
  std::vector<Axis> label(n);
  Axis axis = tilt[start] <= kPi / 4 ? Axis::kX : Axis::kZ;
  for (std::size_t m = 0; m < n; ++m) {
    const std::size_t i = (start + m) % n;
    const double dev = axis == Axis::kX ? tilt[i] : kPi / 2 - tilt[i];
    if (dev > cfg.corner_angle) axis = other(axis);
    label[i] = axis;
  }
  return label;
}

struct Run {
  Axis axis;
  std::vector<std::size_t> idx;
};

// Maximal runs of equal labels in walk order beginning at start, with the
// last run folded into the first when they share an axis.
std::vector<Run> runs_of(const std::vector<Axis>& label, std::size_t start) {
  const std::size_t n = label.size();
  std::vector<Run> runs;
  for (std::size_t m = 0; m < n; ++m) {
    const std::size_t i = (start + m) % n;
    if (runs.empty() || runs.back().axis != label[i]) runs.push_back({label[i], {}});
    runs.back().idx.push_back(i);
  }
  if (runs.size() > 1 && runs.front().axis == runs.back().axis) {
    runs.back().idx.insert(runs.back().idx.end(), runs.front().idx.begin(), runs.front().idx.end());
    runs.front() = std::move(runs.back());
    runs.pop_back();
  }
  return runs;
}

double median_of(std::vector<double> v) {
  const auto mid = v.begin() + static_cast<long>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

// A run spanning few rays still counts as a wall when it is long and
// straight, as oblique walls are.
bool significant(const std::vector<std::size_t>& idx, Axis axis, const std::vector<PlanPoint>& pts,
                 std::size_t min_run, double collinear_tol) {
  if (idx.size() >= min_run) return true;
  if (idx.size() < 3) return false;
  std::vector<double> v, dev;
  double lo = across(pts[idx.front()], axis), hi = lo;
  for (std::size_t i : idx) {
    v.push_back(along(pts[i], axis));
    lo = std::min(lo, across(pts[i], axis));
    hi = std::max(hi, across(pts[i], axis));
  }
  const double m = median_of(v);
  for (double x : v) dev.push_back(std::abs(x - m));
  return hi - lo >= std::max(collinear_tol, 10.0 * 1.4826 * median_of(dev));
}

// cut[k] marks a step in the wall offset between run positions k-1 and k:
// the medians of the windows on either side differ by more than
// split_ratio times the depth there. One cut per stretch of large steps.
std::vector<bool> level_shifts(const Run& run, const std::vector<PlanPoint>& pts, const std::vector<double>& depth,
                               double split_ratio, std::size_t window) {
  const std::size_t len = run.idx.size();
  std::vector<double> v(len);
  for (std::size_t k = 0; k < len; ++k) v[k] = along(pts[run.idx[k]], run.axis);
  std::vector<double> excess(len, 0.0);
  for (std::size_t k = 1; k < len; ++k) {
    const std::vector<double> left(v.begin() + static_cast<long>(k - std::min(k, window)), v.begin() + static_cast<long>(k));
    const std::vector<double> right(v.begin() + static_cast<long>(k),
                                    v.begin() + static_cast<long>(std::min(len, k + window)));
    const double step = std::abs(median_of(right) - median_of(left));
    const double limit = split_ratio * std::min(depth[run.idx[k - 1]], depth[run.idx[k]]);
    excess[k] = step > limit ? step / limit : 0.0;
  }
  std::vector<bool> cut(len, false);
  for (std::size_t k = 1; k < len;) {
    if (excess[k] == 0.0) {
      ++k;
      continue;
    }
    std::size_t best = k;
    for (; k < len && excess[k] > 0.0; ++k) {
      if (excess[k] > excess[best]) best = k;
    }
    cut[best] = true;
  }
  return cut;
}

}  // namespace

SnapResult manhattan_snap_detailed(const BoundaryPair& pair, double ceiling_ratio, double camera_height,
                                   const SnapConfig& cfg) {
  const auto lifted = lift_to_plane(pair.floor(), camera_height, ceiling_ratio);
  const std::size_t n = lifted.size();
  if (n < 8) fail(ErrorCode::kSnapFailure, "boundary too sparse to snap (" + std::to_string(n) + " points)");

  std::vector<PlanPoint> raw(n);
  std::vector<double> depth(n);
  for (std::size_t i = 0; i < n; ++i) {
    raw[i] = {lifted[i].x, lifted[i].z};
    depth[i] = std::hypot(raw[i].x, raw[i].z);
  }

  const double rotation = dominant_direction(raw, static_cast<int>(points_in(cfg.chord_arc, n)), std::max(4, cfg.histogram_bins));
  std::vector<PlanPoint> pts(n);
  for (std::size_t i = 0; i < n; ++i) pts[i] = rotate(raw[i], -rotation);

  std::size_t start = 0;
  std::vector<Axis> label = label_points(pts, depth, cfg, start);

  const auto min_run = static_cast<std::size_t>(points_in(cfg.min_run_arc, n));

  // Absorb short runs into their neighbours.
  std::vector<Run> runs = runs_of(label, start);
  while (runs.size() > 1) {
    const Run* shortest = nullptr;
    for (const Run& r : runs) {
      if (significant(r.idx, r.axis, pts, min_run, cfg.collinear_tol)) continue;
      if (!shortest || r.idx.size() < shortest->idx.size()) shortest = &r;
    }
    if (!shortest) break;
    for (std::size_t i : shortest->idx) label[i] = other(shortest->axis);
    runs = runs_of(label, start);
  }
  if (runs.size() < 2) fail(ErrorCode::kSnapFailure, "boundary has a single wall direction");

  // Split runs where the wall offset steps and fit one wall per piece.
  const auto window = static_cast<std::size_t>(std::max(2L, points_in(cfg.chord_arc, n) / 2));
  std::vector<Wall> walls;
  for (const Run& run : runs) {
    std::vector<std::size_t> piece;
    auto flush = [&]() {
      Wall w;
      if (significant(piece, run.axis, pts, min_run, cfg.collinear_tol) && fit_wall(piece, run.axis, pts, depth, w)) {
        walls.push_back(std::move(w));
      }
      piece.clear();
    };
    const std::vector<bool> cut = level_shifts(run, pts, depth, cfg.split_ratio, window);
    for (std::size_t k = 0; k < run.idx.size(); ++k) {
      if (cut[k]) flush();
      piece.push_back(run.idx[k]);
    }
    flush();
  }

  // Merge neighbouring parallel walls that are collinear.
  bool changed = true;
  while (changed && walls.size() > 1) {
    changed = false;
    for (std::size_t k = 0; k < walls.size(); ++k) {
      const std::size_t next = (k + 1) % walls.size();
      if (next == k) break;
      if (walls[k].axis == walls[next].axis && std::abs(walls[k].coord - walls[next].coord) <= cfg.collinear_tol) {
        Wall w = merged(walls[k], walls[next], pts, depth);
        if (next == 0) {
          walls[0] = std::move(w);
          walls.pop_back();
        } else {
          walls[k] = std::move(w);
          walls.erase(walls.begin() + static_cast<long>(next));
        }
        changed = true;
        break;
      }
    }
  }

  // Parallel neighbours at different offsets meet through a hidden wall that
  // passes the nearer of the two facing endpoints.
  std::vector<Wall> closed;
  for (std::size_t k = 0; k < walls.size(); ++k) {
    const Wall& cur = walls[k];
    const Wall& next = walls[(k + 1) % walls.size()];
    closed.push_back(cur);
    if (walls.size() > 1 && cur.axis == next.axis) {
      const std::size_t a = cur.support.back();
      const std::size_t b = next.support.front();
      const std::size_t nearer = depth[a] <= depth[b] ? a : b;
      Wall bridge;
      bridge.axis = other(cur.axis);
      bridge.coord = across(pts[nearer], cur.axis);
      bridge.support = {nearer};
      closed.push_back(std::move(bridge));
    }
  }
  if (closed.size() < 4) {
    fail(ErrorCode::kSnapFailure, "found only " + std::to_string(closed.size()) + " walls");
  }

  Polygon corners;
  corners.reserve(closed.size());
  for (std::size_t k = 0; k < closed.size(); ++k) {
    const Wall& cur = closed[k];
    const Wall& next = closed[(k + 1) % closed.size()];
    const PlanPoint p = cur.axis == Axis::kX ? PlanPoint{next.coord, cur.coord} : PlanPoint{cur.coord, next.coord};
    corners.push_back(rotate(p, rotation));
  }
  try {
    return {LayoutAnnotation(std::move(corners), camera_height, ceiling_ratio), rotation};
  } catch (const Error& e) {
    fail(ErrorCode::kSnapFailure, std::string("snapped polygon rejected: ") + e.what());
  }
}

LayoutAnnotation manhattan_snap(const BoundaryPair& pair, double ceiling_ratio, double camera_height,
                                const SnapConfig& cfg) {
  return manhattan_snap_detailed(pair, ceiling_ratio, camera_height, cfg).annotation;
}

}  // namespace hdk
