#include "hdk/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "hdk/error.hpp"

namespace hdk::io {

namespace fs = std::filesystem;

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kFormat, "cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Json parse_json(std::string_view text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::kFormat, what + ": " + e.what());
  }
}

namespace {

void dump_into(const Json& j, std::string& out, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(2 * depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(it.key()).dump() + ": ";
        dump_into(it.value(), out, depth + 1);
      }
      out += "\n" + close + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i > 0) out += ",\n";
        out += pad;
        dump_into(j[i], out, depth + 1);
      }
      out += "\n" + close + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      return;
    }
    default:
      out += j.dump();
  }
}

const Json& member(const Json& doc, const char* key) {
  if (!doc.is_object()) fail(ErrorCode::kFormat, "expected a JSON object");
  auto it = doc.find(key);
  if (it == doc.end()) fail(ErrorCode::kFormat, std::string("missing key '") + key + "'");
  return *it;
}

double number(const Json& j, const std::string& what) {
  if (!j.is_number()) fail(ErrorCode::kFormat, what + " must be a number");
  return j.get<double>();
}

double number_or(const Json& doc, const char* key, double fallback) {
  auto it = doc.find(key);
  return it == doc.end() ? fallback : number(*it, key);
}

long long integer(const Json& j, const std::string& what) {
  if (!j.is_number_integer()) fail(ErrorCode::kFormat, what + " must be an integer");
  return j.get<long long>();
}

std::vector<double> numbers(const Json& j, const std::string& what) {
  if (!j.is_array()) fail(ErrorCode::kFormat, what + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], what + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<std::array<double, 2>> pairs(const Json& j, const std::string& what) {
  if (!j.is_array()) fail(ErrorCode::kFormat, what + " must be an array");
  std::vector<std::array<double, 2>> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto v = numbers(j[i], what + "[" + std::to_string(i) + "]");
    if (v.size() != 2) fail(ErrorCode::kFormat, what + "[" + std::to_string(i) + "] must hold 2 numbers");
    out.push_back({v[0], v[1]});
  }
  return out;
}

}  // namespace

std::string dump(const Json& doc) {
  std::string out;
  dump_into(doc, out, 0);
  out += "\n";
  return out;
}

void write_atomic(const fs::path& path, std::string_view content) {
  const auto tid = std::hash<std::thread::id>{}(std::this_thread::get_id());
  fs::path tmp = path;
  tmp += ".tmp" + std::to_string(tid);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::kFormat, "cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) fail(ErrorCode::kFormat, "cannot write " + path.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    fail(ErrorCode::kFormat, "cannot move output into place at " + path.string());
  }
}

LayoutAnnotation annotation_from_json(const Json& doc) {
  if (!doc.is_object()) fail(ErrorCode::kFormat, "annotation must be a JSON object");
  const double h = number_or(doc, "camera_height", kDefaultCameraHeight);
  const double ratio = number(member(doc, "ceiling_ratio"), "ceiling_ratio");
  Polygon corners;
  if (doc.contains("corners_xz")) {
    for (const auto& [x, z] : pairs(doc["corners_xz"], "corners_xz")) corners.push_back({x, z});
  } else if (doc.contains("corners_pixels")) {
    const auto w = integer(member(doc, "image_width"), "image_width");
    const auto ht = integer(member(doc, "image_height"), "image_height");
    for (const auto& [px, py] : pairs(doc["corners_pixels"], "corners_pixels")) {
      const SphericalPoint q = pixel_to_spherical(px, py, static_cast<int>(w), static_cast<int>(ht));
      const Vec3 p = lift_point(spherical_to_cartesian(q), Surface::kFloor, h, ratio);
      corners.push_back({p.x, p.z});
    }
  } else {
    fail(ErrorCode::kFormat, "annotation needs corners_xz or corners_pixels");
  }
  return LayoutAnnotation(std::move(corners), h, ratio);
}

Json annotation_to_json(const LayoutAnnotation& a) {
  Json corners = Json::array();
  for (const PlanPoint& p : a.corners()) corners.push_back({p.x, p.z});
  return Json{{"corners_xz", corners}, {"camera_height", a.camera_height()}, {"ceiling_ratio", a.ceiling_ratio()}};
}

BoundaryFile boundary_from_json(const Json& doc) {
  if (!doc.is_object()) fail(ErrorCode::kFormat, "boundary must be a JSON object");
  const double h = number_or(doc, "camera_height", kDefaultCameraHeight);
  const double ratio = number(member(doc, "ceiling_ratio"), "ceiling_ratio");
  const auto theta = numbers(member(doc, "theta"), "theta");
  const auto fp = numbers(member(doc, "floor_phi"), "floor_phi");
  const auto cp = numbers(member(doc, "ceiling_phi"), "ceiling_phi");
  if (fp.size() != theta.size() || cp.size() != theta.size()) {
    fail(ErrorCode::kFormat, "theta, floor_phi and ceiling_phi must have equal lengths");
  }
  if (!(h > 0.0) || !(ratio > 0.0)) fail(ErrorCode::kDomain, "camera_height and ceiling_ratio must be positive");
  return {BoundaryPair::from_latitudes(theta, fp, cp), h, ratio};
}

Json boundary_to_json(const BoundaryPair& pair, double camera_height, double ceiling_ratio) {
  Json theta = Json::array(), fp = Json::array(), cp = Json::array();
  for (std::size_t i = 0; i < pair.size(); ++i) {
    theta.push_back(pair.floor()[i].theta);
    fp.push_back(pair.floor()[i].phi);
    cp.push_back(pair.ceiling()[i].phi);
  }
  return Json{{"camera_height", camera_height},
              {"ceiling_ratio", ceiling_ratio},
              {"theta", theta},
              {"floor_phi", fp},
              {"ceiling_phi", cp}};
}

HorizonDepthMap depth_from_json(const Json& doc) {
  const auto m = integer(member(doc, "m"), "m");
  auto values = numbers(member(doc, "values"), "values");
  if (m < 0 || static_cast<std::size_t>(m) != values.size()) {
    fail(ErrorCode::kFormat, "depth map declares m = " + std::to_string(m) + " but holds " +
                                 std::to_string(values.size()) + " values");
  }
  try {
    return HorizonDepthMap(std::move(values));
  } catch (const Error& e) {
    fail(ErrorCode::kFormat, std::string("invalid depth map: ") + e.what());
  }
}

HorizonDepthMap depth_from_csv(std::string_view text) {
  std::vector<double> values;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == ',')) line.remove_suffix(1);
    while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
    if (line.empty()) continue;
    double v = 0.0;
    const auto [end, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
    if (ec != std::errc{} || end != line.data() + line.size()) {
      fail(ErrorCode::kFormat, "depth CSV line " + std::to_string(line_no) + " is not a number");
    }
    values.push_back(v);
  }
  try {
    return HorizonDepthMap(std::move(values));
  } catch (const Error& e) {
    fail(ErrorCode::kFormat, std::string("invalid depth map: ") + e.what());
  }
}

HorizonDepthMap read_depth(const fs::path& path) {
  const std::string text = read_text(path);
  if (path.extension() == ".csv") return depth_from_csv(text);
  return depth_from_json(parse_json(text, path.filename().string()));
}

Json depth_to_json(const HorizonDepthMap& depth) {
  return Json{{"m", depth.m()}, {"values", Json(std::vector<double>(depth.values().begin(), depth.values().end()))}};
}

std::string depth_to_csv(const HorizonDepthMap& depth) {
  std::string out;
  char buf[32];
  for (double v : depth.values()) {
    std::snprintf(buf, sizeof buf, "%.17g\n", v);
    out += buf;
  }
  return out;
}

FitConfig fit_config_from_json(const Json& doc, FitConfig cfg) {
  if (!doc.is_object()) fail(ErrorCode::kFormat, "fit config must be a JSON object");
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string& k = it.key();
    const Json& v = it.value();
    if (k == "n_points") cfg.n_points = static_cast<int>(integer(v, k));
    else if (k == "m_rays") cfg.m_rays = static_cast<int>(integer(v, k));
    else if (k == "max_iters") cfg.max_iters = static_cast<int>(integer(v, k));
    else if (k == "step_size") cfg.step_size = number(v, k);
    else if (k == "convergence_tol") cfg.convergence_tol = number(v, k);
    else if (k == "seed") cfg.seed = static_cast<std::uint64_t>(integer(v, k));
    else if (k == "camera_height") cfg.camera_height = number(v, k);
    else if (k == "ceiling_ratio") cfg.ceiling_ratio = number(v, k);
    else fail(ErrorCode::kFormat, "unknown fit config key '" + k + "'");
  }
  cfg.validate();
  return cfg;
}

Json fit_config_to_json(const FitConfig& cfg) {
  return Json{{"n_points", cfg.n_points},
              {"m_rays", cfg.m_rays},
              {"max_iters", cfg.max_iters},
              {"step_size", cfg.step_size},
              {"convergence_tol", cfg.convergence_tol},
              {"seed", cfg.seed},
              {"camera_height", cfg.camera_height},
              {"ceiling_ratio", cfg.ceiling_ratio}};
}

Json iou_report_to_json(const IoUReport& r) {
  return Json{{"iou_2d", r.iou_2d},
              {"iou_3d", r.iou_3d},
              {"gt_corners", r.gt_corners},
              {"bucket", r.bucket ? Json(to_string(*r.bucket)) : Json(nullptr)}};
}

Json bucket_table_to_json(const BucketTable& t) {
  auto row = [](const char* name, const BucketRow& r) {
    Json j{{"corners", name}, {"count", r.count}};
    j["mean_iou_2d"] = r.count ? Json(r.mean_iou_2d) : Json(nullptr);
    j["mean_iou_3d"] = r.count ? Json(r.mean_iou_3d) : Json(nullptr);
    return j;
  };
  Json rows = Json::array();
  for (std::size_t i = 0; i < t.buckets.size(); ++i) {
    rows.push_back(row(to_string(static_cast<CornerBucket>(i)), t.buckets[i]));
  }
  rows.push_back(row("overall", t.overall));
  return rows;
}

Json manifest_to_json(const Manifest& m) {
  Json inputs = Json::array();
  for (const auto& [name, hash] : m.inputs) inputs.push_back({{"name", name}, {"fnv1a", hex64(hash)}});
  return Json{{"command", m.command},
              {"version", kToolVersion},
              {"inputs", inputs},
              {"config_hash", hex64(m.config_hash)},
              {"seed", m.seed},
              {"duration_seconds", m.duration_seconds}};
}

}  // namespace hdk::io
