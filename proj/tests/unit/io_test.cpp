#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "hdk/io.hpp"
#include "rooms.hpp"
#include "test_util.hpp"

namespace hdk {
namespace {

using io::Json;
using testing::error_code_of;

TEST(Io, Fnv1aKnownValues) {
  EXPECT_EQ(io::fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(io::fnv1a("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(io::hex64(0xabcULL), "0000000000000abc");
}

TEST(Io, AnnotationRoundTrip) {
  std::mt19937_64 rng(8);
  const LayoutAnnotation a(testing::random_manhattan_room(rng), 1.7, 0.85);
  const LayoutAnnotation b = io::annotation_from_json(io::parse_json(io::dump(io::annotation_to_json(a)), "t"));
  EXPECT_EQ(b.corners(), a.corners());
  EXPECT_EQ(b.camera_height(), 1.7);
  EXPECT_EQ(b.ceiling_ratio(), 0.85);
}

TEST(Io, AnnotationFromPixels) {
  // Four floor corners at the diagonals of a 2 m square around the camera.
  const double w = 1024, h = 512;
  Json corners = Json::array();
  for (double theta : {-3 * kPi / 4, -kPi / 4, kPi / 4, 3 * kPi / 4}) {
    const double phi = std::atan2(1.6, std::sqrt(2.0));
    const auto p = spherical_to_pixel({theta, phi}, static_cast<int>(w), static_cast<int>(h));
    corners.push_back(Json::array({p[0], p[1]}));
  }
  const Json doc{{"corners_pixels", corners}, {"image_width", 1024}, {"image_height", 512}, {"ceiling_ratio", 1.0}};
  const LayoutAnnotation a = io::annotation_from_json(doc);
  EXPECT_EQ(a.camera_height(), kDefaultCameraHeight);
  ASSERT_EQ(a.corners().size(), 4u);
  for (const PlanPoint& p : a.corners()) {
    EXPECT_NEAR(std::abs(p.x), 1.0, 1e-9);
    EXPECT_NEAR(std::abs(p.z), 1.0, 1e-9);
  }
}

TEST(Io, AnnotationErrors) {
  EXPECT_EQ(error_code_of([] { io::annotation_from_json(Json{{"corners_xz", {{-1, -1}, {1, -1}, {1, 1}}}}); }),
            ErrorCode::kFormat);
  EXPECT_EQ(error_code_of([] { io::parse_json("{\"a\": [1, 2", "broken"); }), ErrorCode::kFormat);
  EXPECT_EQ(error_code_of([] { io::read_text("/nonexistent/file.json"); }), ErrorCode::kFormat);
}

TEST(Io, DepthJsonAndCsvRoundTripExactly) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.5, 9.0);
  std::vector<double> v(37);
  for (double& x : v) x = u(rng);
  const HorizonDepthMap d(v);
  const HorizonDepthMap from_json = io::depth_from_json(io::parse_json(io::dump(io::depth_to_json(d)), "t"));
  const HorizonDepthMap from_csv = io::depth_from_csv(io::depth_to_csv(d));
  for (std::size_t j = 0; j < v.size(); ++j) {
    EXPECT_EQ(from_json[j], v[j]);
    EXPECT_EQ(from_csv[j], v[j]);
  }
}

TEST(Io, DumpUsesSeventeenDigits) {
  const std::string text = io::dump(Json{{"x", 0.1}});
  EXPECT_NE(text.find("0.10000000000000001"), std::string::npos) << text;
  EXPECT_EQ(text.find('\t'), std::string::npos);
}

TEST(Io, TruncatedDepthIsAFormatError) {
  const Json doc{{"m", 256}, {"values", {1.0, 2.0, 3.0}}};
  EXPECT_EQ(error_code_of([&] { io::depth_from_json(doc); }), ErrorCode::kFormat);
  EXPECT_EQ(error_code_of([] { io::depth_from_csv("1.0\nabc\n"); }), ErrorCode::kFormat);
}

TEST(Io, BoundaryRoundTrip) {
  const LayoutAnnotation a({{-1, -2}, {3, -2}, {3, 1}, {-1, 1}}, 1.6, 0.9);
  const BoundaryPair pair = sample_boundary_pair(a, 64);
  const io::BoundaryFile f = io::boundary_from_json(io::parse_json(io::dump(io::boundary_to_json(pair, 1.6, 0.9)), "t"));
  EXPECT_EQ(f.camera_height, 1.6);
  EXPECT_EQ(f.ceiling_ratio, 0.9);
  ASSERT_EQ(f.pair.size(), pair.size());
  for (std::size_t i = 0; i < pair.size(); ++i) {
    EXPECT_EQ(f.pair.floor()[i].theta, pair.floor()[i].theta);
    EXPECT_EQ(f.pair.floor()[i].phi, pair.floor()[i].phi);
    EXPECT_EQ(f.pair.ceiling()[i].phi, pair.ceiling()[i].phi);
  }
}

TEST(Io, FitConfigOverridesAndRejectsUnknownKeys) {
  FitConfig base;
  base.m_rays = 512;
  const FitConfig c = io::fit_config_from_json(Json{{"max_iters", 50}, {"step_size", 2.5}}, base);
  EXPECT_EQ(c.max_iters, 50);
  EXPECT_EQ(c.step_size, 2.5);
  EXPECT_EQ(c.m_rays, 512);
  EXPECT_EQ(error_code_of([] { io::fit_config_from_json(Json{{"learning_rate", 0.1}}); }), ErrorCode::kFormat);
  EXPECT_EQ(error_code_of([] { io::fit_config_from_json(Json{{"n_points", 2}}); }), ErrorCode::kDomain);
  const FitConfig back = io::fit_config_from_json(io::fit_config_to_json(c));
  EXPECT_EQ(back.max_iters, 50);
  EXPECT_EQ(back.m_rays, 512);
}

TEST(Io, WriteAtomicReplacesContent) {
  const auto dir = std::filesystem::temp_directory_path() / "hdk_io_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "out.json";
  io::write_atomic(path, "first");
  io::write_atomic(path, "second");
  EXPECT_EQ(io::read_text(path), "second");
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++files;
  EXPECT_EQ(files, 1u);
  std::filesystem::remove_all(dir);
}

TEST(Io, ManifestFieldOrder) {
  io::Manifest m{"render", {{"room.json", 0x1234}}, 0x99, 7, 0.5};
  const Json j = io::manifest_to_json(m);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"command", "version", "inputs", "config_hash", "seed", "duration_seconds"}));
  EXPECT_EQ(j["version"], io::kToolVersion);
  EXPECT_EQ(j["inputs"][0]["name"], "room.json");
}

}  // namespace
}  // namespace hdk
