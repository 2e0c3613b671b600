// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "lumiforge/light_grid.hpp"

namespace lumiforge {

// Trajectory documents:
//   {"grid": {"extent_cm", "spacing_cm", "origin_cm": [x,y,z]},
//    "kind": "horizontal", "points": [[i,j,k], ...], "intensities": [1.0]}
// Multi-light documents replace kind/points with
//    "tracks": [{"kind", "points"}, ...] and require one intensity per track.

nlohmann::json grid_to_json(const LightGrid& grid);
LightGrid grid_from_json(const nlohmann::json& doc);

nlohmann::json trajectory_to_json(const MultiLightTrajectory& trajectory);
MultiLightTrajectory trajectory_from_json(const nlohmann::json& doc);

void save_trajectory(const MultiLightTrajectory& trajectory, const std::filesystem::path& path);
MultiLightTrajectory load_trajectory(const std::filesystem::path& path);

}  // namespace lumiforge
