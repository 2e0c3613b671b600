// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "lumiforge/trajectory_io.hpp"

#include <fstream>

#include "lumiforge/error.hpp"

namespace lumiforge {
namespace {

using nlohmann::json;

json points_to_json(const std::vector<GridIndex>& points) {
  json out = json::array();
  for (const auto& p : points) out.push_back({p.i, p.j, p.k});
  return out;
}

std::vector<GridIndex> points_from_json(const json& doc) {
  if (!doc.is_array()) throw InvalidArgument("trajectory 'points' must be an array");
  std::vector<GridIndex> points;
  points.reserve(doc.size());
  for (const auto& p : doc) {
    if (!p.is_array() || p.size() != 3) {
      throw InvalidArgument("trajectory point must be [i, j, k]");
    }
    points.push_back({p[0].get<int>(), p[1].get<int>(), p[2].get<int>()});
  }
  return points;
}

}  // namespace

json grid_to_json(const LightGrid& grid) {
  const Vec3& o = grid.origin_cm();
  return {{"extent_cm", grid.extent_cm()},
          {"spacing_cm", grid.spacing_cm()},
          {"origin_cm", {o.x(), o.y(), o.z()}}};
}

LightGrid grid_from_json(const json& doc) {
  try {
    const auto& o = doc.at("origin_cm");
    if (!o.is_array() || o.size() != 3) throw InvalidArgument("origin_cm must be a 3-vector");
    return build_grid(doc.at("extent_cm").get<double>(), doc.at("spacing_cm").get<double>(),
                      Vec3(o[0].get<double>(), o[1].get<double>(), o[2].get<double>()));
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed grid: ") + e.what());
  }
}

json trajectory_to_json(const MultiLightTrajectory& trajectory) {
  if (trajectory.tracks.empty()) throw InvalidArgument("empty trajectory");
  json doc;
  doc["grid"] = grid_to_json(trajectory.grid());
  if (trajectory.tracks.size() == 1) {
    doc["kind"] = std::string(to_string(trajectory.tracks.front().kind));
    doc["points"] = points_to_json(trajectory.tracks.front().points);
  } else {
    json tracks = json::array();
    for (const auto& t : trajectory.tracks) {
      tracks.push_back({{"kind", std::string(to_string(t.kind))}, {"points", points_to_json(t.points)}});
    }
    doc["tracks"] = std::move(tracks);
  }
  doc["intensities"] = trajectory.intensities;
  return doc;
}

MultiLightTrajectory trajectory_from_json(const json& doc) {
  try {
    const LightGrid grid = grid_from_json(doc.at("grid"));
    std::vector<LightTrajectory> tracks;
    if (doc.contains("tracks")) {
      for (const auto& t : doc.at("tracks")) {
        tracks.push_back(make_trajectory(grid, points_from_json(t.at("points")),
                                         trajectory_kind_from_string(t.at("kind").get<std::string>())));
      }
    } else {
      tracks.push_back(make_trajectory(grid, points_from_json(doc.at("points")),
                                       trajectory_kind_from_string(doc.value("kind", std::string("custom")))));
    }
    std::vector<double> intensities(tracks.size(), 1.0);
    if (doc.contains("intensities")) intensities = doc.at("intensities").get<std::vector<double>>();
    return superpose(std::move(tracks), std::move(intensities));
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed trajectory document: ") + e.what());
  }
}

void save_trajectory(const MultiLightTrajectory& trajectory, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open trajectory for writing", path);
  out << trajectory_to_json(trajectory).dump(2) << "\n";
  if (!out) throw IoError("failed writing trajectory", path);
}

MultiLightTrajectory load_trajectory(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trajectory", path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw IoError(std::string("invalid JSON (") + e.what() + ")", path);
  }
  return trajectory_from_json(doc);
}

}  // namespace lumiforge
