#pragma once

// File formats used by the command-line tool. Every malformed document is
// reported as kFormat.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hdk/depth_render.hpp"
#include "hdk/evalkit.hpp"
#include "hdk/fitting.hpp"
#include "hdk/layout.hpp"

namespace hdk::io {

using Json = nlohmann::ordered_json;

std::uint64_t fnv1a(std::string_view bytes);
std::string hex64(std::uint64_t value);

std::string read_text(const std::filesystem::path& path);
Json parse_json(std::string_view text, const std::string& what);

/// Pretty-printed with two-space indentation; floating-point numbers use 17
/// significant digits so doubles round-trip exactly.
std::string dump(const Json& doc);

/// Writes through a sibling temporary file and renames it into place.
void write_atomic(const std::filesystem::path& path, std::string_view content);

LayoutAnnotation annotation_from_json(const Json& doc);
Json annotation_to_json(const LayoutAnnotation& a);

struct BoundaryFile {
  BoundaryPair pair;
  double camera_height = kDefaultCameraHeight;
  double ceiling_ratio = 1.0;
};

BoundaryFile boundary_from_json(const Json& doc);
Json boundary_to_json(const BoundaryPair& pair, double camera_height, double ceiling_ratio);

HorizonDepthMap depth_from_json(const Json& doc);
HorizonDepthMap depth_from_csv(std::string_view text);
/// CSV when the extension is .csv, JSON otherwise.
HorizonDepthMap read_depth(const std::filesystem::path& path);
Json depth_to_json(const HorizonDepthMap& depth);
std::string depth_to_csv(const HorizonDepthMap& depth);

/// Keys missing from the document keep their defaults; unknown keys are rejected.
FitConfig fit_config_from_json(const Json& doc, FitConfig base = {});
Json fit_config_to_json(const FitConfig& cfg);

Json iou_report_to_json(const IoUReport& r);
Json bucket_table_to_json(const BucketTable& t);

struct Manifest {
  std::string command;
  std::vector<std::pair<std::string, std::uint64_t>> inputs;  // file name, content hash
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  double duration_seconds = 0.0;
};

inline constexpr const char* kToolVersion = "0.1.0";

Json manifest_to_json(const Manifest& m);

}  // namespace hdk::io
