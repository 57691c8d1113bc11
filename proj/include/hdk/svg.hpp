#pragma once

#include <span>
#include <string>

#include "hdk/depth_render.hpp"
#include "hdk/polygon.hpp"

namespace hdk {

/// Two panels: the floor plan (with the camera at the origin) and the
/// floor/ceiling horizon depth against longitude.
std::string plot_svg(std::span<const PlanPoint> floor_plan, const HorizonDepthMap& floor_depth,
                     const HorizonDepthMap& ceiling_depth);

}  // namespace hdk
