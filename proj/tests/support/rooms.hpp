#pragma once

// Test-only room generation and brute-force reference computations.

#include <filesystem>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hdk/layout.hpp"
#include "hdk/polygon.hpp"

namespace hdk::testing {

/// Simple axis-aligned room built from a union of grid cells, with the
/// camera (origin) at a random point strictly inside. Corner count lies in
/// [min_corners, max_corners].
Polygon random_manhattan_room(std::mt19937_64& rng, int min_corners = 4, int max_corners = 14);

/// As random_manhattan_room, redrawn until every corner is visible from the
/// camera, so the whole floor shows up in the horizon depth.
Polygon random_visible_room(std::mt19937_64& rng, int min_corners = 4, int max_corners = 14);

/// Distance along each of m equiangular horizontal rays to the nearest
/// polygon edge, by direct 2-D ray/segment intersection.
std::vector<double> oracle_depths(const Polygon& poly, int m);

using NamedRoom = std::pair<std::string, LayoutAnnotation>;

/// Every *.json annotation in dir, sorted by name.
std::vector<NamedRoom> load_rooms(const std::filesystem::path& dir);

}  // namespace hdk::testing
