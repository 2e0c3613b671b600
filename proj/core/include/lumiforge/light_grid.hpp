// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace lumiforge {

using Vec3 = Eigen::Vector3d;

/// Lattice coordinates. i runs along camera-horizontal (image right), j along
/// depth (toward the camera), k along vertical (up).
struct GridIndex {
  int i = 0;
  int j = 0;
  int k = 0;

  friend bool operator==(const GridIndex&, const GridIndex&) = default;
};

/// A cubic lattice of candidate point-light positions, in centimeters.
class LightGrid {
 public:
  double extent_cm() const { return extent_cm_; }
  double spacing_cm() const { return spacing_cm_; }
  const Vec3& origin_cm() const { return origin_cm_; }
  int n_per_axis() const { return n_per_axis_; }
  std::size_t size() const {
    const auto n = static_cast<std::size_t>(n_per_axis_);
    return n * n * n;
  }

  bool contains(const GridIndex& idx) const;
  /// Throws InvalidArgument when idx is outside the lattice.
  void check(const GridIndex& idx) const;

  /// origin + index * spacing, evaluated per axis.
  Vec3 world_position(const GridIndex& idx) const;
  Vec3 centroid() const;

  std::size_t flat_index(const GridIndex& idx) const;
  GridIndex from_flat(std::size_t flat) const;

  /// Nearest lattice point to a fractional lattice coordinate, rounding halves
  /// away from zero. Does not bounds-check.
  static GridIndex snap(double fi, double fj, double fk);

  friend bool operator==(const LightGrid&, const LightGrid&) = default;

 private:
  friend LightGrid build_grid(double, double, const Vec3&);
  double extent_cm_ = 0.0;
  double spacing_cm_ = 0.0;
  Vec3 origin_cm_ = Vec3::Zero();
  int n_per_axis_ = 0;
};

/// Spacing must divide extent to 1e-9 relative tolerance.
LightGrid build_grid(double extent_cm, double spacing_cm, const Vec3& origin_cm);

/// The 160 cm / 5 cm lattice with the subject's head at its centroid.
LightGrid default_grid();

enum class TrajectoryKind { kHorizontal, kVertical, kDiagonal, kArc, kCustom };

std::string_view to_string(TrajectoryKind kind);
TrajectoryKind trajectory_kind_from_string(std::string_view name);

struct LightTrajectory {
  LightGrid grid;
  TrajectoryKind kind = TrajectoryKind::kCustom;
  std::vector<GridIndex> points;

  std::size_t size() const { return points.size(); }
};

struct MultiLightTrajectory {
  std::vector<LightTrajectory> tracks;
  std::vector<double> intensities;

  std::size_t size() const { return tracks.empty() ? 0 : tracks.front().size(); }
  const LightGrid& grid() const { return tracks.front().grid; }
};

/// Validates bounds and non-emptiness; kind is taken as given.
LightTrajectory make_trajectory(const LightGrid& grid, std::vector<GridIndex> points,
                                TrajectoryKind kind = TrajectoryKind::kCustom);

/// Rounded lattice walk from start to end over n_frames samples.
LightTrajectory linear_trajectory(const LightGrid& grid, const GridIndex& start,
                                  const GridIndex& end, int n_frames);

/// Axis selector for arc planes: 0 = i, 1 = j, 2 = k.
struct AxisPair {
  int first = 0;
  int second = 2;
};

LightTrajectory arc_trajectory(const LightGrid& grid, const GridIndex& center,
                               double radius_cm, AxisPair plane, double angle_start,
                               double angle_end, int n_frames);

MultiLightTrajectory superpose(std::vector<LightTrajectory> tracks,
                               std::vector<double> intensities);

/// Wraps a single track as a one-light composite with unit intensity.
MultiLightTrajectory as_multi(const LightTrajectory& track);

}  // namespace lumiforge
