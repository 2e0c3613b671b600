// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "lumiforge/light_grid.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "lumiforge/error.hpp"

namespace lumiforge {
namespace {

std::string describe(const GridIndex& idx) {
  std::ostringstream os;
  os << "(" << idx.i << "," << idx.j << "," << idx.k << ")";
  return os.str();
}

// round(num / den) with halves away from zero, in exact integer arithmetic.
long long rounded_ratio(long long num, long long den) {
  const bool negative = (num < 0) != (den < 0);
  const long long a = std::llabs(num);
  const long long b = std::llabs(den);
  const long long q = (2 * a + b) / (2 * b);
  return negative ? -q : q;
}

}  // namespace

bool LightGrid::contains(const GridIndex& idx) const {
  return idx.i >= 0 && idx.j >= 0 && idx.k >= 0 && idx.i < n_per_axis_ &&
         idx.j < n_per_axis_ && idx.k < n_per_axis_;
}

void LightGrid::check(const GridIndex& idx) const {
  if (!contains(idx)) {
    throw InvalidArgument("grid index " + describe(idx) + " outside lattice with " +
                          std::to_string(n_per_axis_) + " points per axis");
  }
}

Vec3 LightGrid::world_position(const GridIndex& idx) const {
  check(idx);
  return {origin_cm_.x() + idx.i * spacing_cm_, origin_cm_.y() + idx.j * spacing_cm_,
          origin_cm_.z() + idx.k * spacing_cm_};
}

Vec3 LightGrid::centroid() const {
  return origin_cm_ + Vec3::Constant(0.5 * (n_per_axis_ - 1) * spacing_cm_);
}

std::size_t LightGrid::flat_index(const GridIndex& idx) const {
  check(idx);
  const auto n = static_cast<std::size_t>(n_per_axis_);
  return (static_cast<std::size_t>(idx.i) * n + static_cast<std::size_t>(idx.j)) * n +
         static_cast<std::size_t>(idx.k);
}

GridIndex LightGrid::from_flat(std::size_t flat) const {
  if (flat >= size()) throw InvalidArgument("flat grid index out of range");
  const auto n = static_cast<std::size_t>(n_per_axis_);
  return {static_cast<int>(flat / (n * n)), static_cast<int>((flat / n) % n),
          static_cast<int>(flat % n)};
}

GridIndex LightGrid::snap(double fi, double fj, double fk) {
  // std::round rounds halves away from zero.
  return {static_cast<int>(std::round(fi)), static_cast<int>(std::round(fj)),
          static_cast<int>(std::round(fk))};
}

LightGrid build_grid(double extent_cm, double spacing_cm, const Vec3& origin_cm) {
  if (!(extent_cm > 0.0) || !(spacing_cm > 0.0)) {
    throw InvalidArgument("grid extent and spacing must be positive");
  }
  const double cells = std::round(extent_cm / spacing_cm);
  if (std::abs(cells * spacing_cm - extent_cm) > 1e-9 * extent_cm || cells < 1.0) {
    std::ostringstream os;
    os << "spacing " << spacing_cm << " cm does not divide extent " << extent_cm
       << " cm into a whole number of cells";
    throw InvalidArgument(os.str());
  }
  LightGrid grid;
  grid.extent_cm_ = extent_cm;
  grid.spacing_cm_ = spacing_cm;
  grid.origin_cm_ = origin_cm;
  grid.n_per_axis_ = static_cast<int>(cells) + 1;
  return grid;
}

LightGrid default_grid() { return build_grid(160.0, 5.0, Vec3(-80.0, -80.0, 0.0)); }

std::string_view to_string(TrajectoryKind kind) {
  switch (kind) {
    case TrajectoryKind::kHorizontal: return "horizontal";
    case TrajectoryKind::kVertical: return "vertical";
    case TrajectoryKind::kDiagonal: return "diagonal";
    case TrajectoryKind::kArc: return "arc";
    case TrajectoryKind::kCustom: return "custom";
  }
  return "custom";
}

TrajectoryKind trajectory_kind_from_string(std::string_view name) {
  if (name == "horizontal") return TrajectoryKind::kHorizontal;
  if (name == "vertical") return TrajectoryKind::kVertical;
  if (name == "diagonal") return TrajectoryKind::kDiagonal;
  if (name == "arc") return TrajectoryKind::kArc;
  if (name == "custom") return TrajectoryKind::kCustom;
  throw InvalidArgument("unknown trajectory kind '" + std::string(name) + "'");
}

LightTrajectory make_trajectory(const LightGrid& grid, std::vector<GridIndex> points,
                                TrajectoryKind kind) {
  if (points.empty()) throw InvalidArgument("trajectory must have at least one point");
  for (const auto& p : points) grid.check(p);
  return {grid, kind, std::move(points)};
}

LightTrajectory linear_trajectory(const LightGrid& grid, const GridIndex& start,
                                  const GridIndex& end, int n_frames) {
  if (n_frames < 1) throw InvalidArgument("n_frames must be >= 1");
  grid.check(start);
  grid.check(end);

  const bool di = start.i != end.i;
  const bool dj = start.j != end.j;
  const bool dk = start.k != end.k;
  TrajectoryKind kind = TrajectoryKind::kDiagonal;
  if (!di && !dj && !dk) {
    kind = TrajectoryKind::kCustom;
  } else if (di && !dj && !dk) {
    kind = TrajectoryKind::kHorizontal;
  } else if (dk && !di && !dj) {
    kind = TrajectoryKind::kVertical;
  }

  std::vector<GridIndex> points;
  points.reserve(static_cast<std::size_t>(n_frames));
  const long long den = std::max(n_frames - 1, 1);
  auto lerp = [den](int a, int b, long long t) {
    return static_cast<int>(rounded_ratio(a * den + t * (b - a), den));
  };
  for (long long t = 0; t < n_frames; ++t) {
    points.push_back({lerp(start.i, end.i, t), lerp(start.j, end.j, t), lerp(start.k, end.k, t)});
  }
  return {grid, kind, std::move(points)};
}

LightTrajectory arc_trajectory(const LightGrid& grid, const GridIndex& center, double radius_cm,
                               AxisPair plane, double angle_start, double angle_end,
                               int n_frames) {
  if (n_frames < 1) throw InvalidArgument("n_frames must be >= 1");
  if (radius_cm < 0.0) throw InvalidArgument("arc radius must be non-negative");
  if (plane.first < 0 || plane.first > 2 || plane.second < 0 || plane.second > 2 ||
      plane.first == plane.second) {
    throw InvalidArgument("arc plane must name two distinct axes");
  }
  grid.check(center);

  const double r_cells = radius_cm / grid.spacing_cm();
  std::vector<GridIndex> points;
  points.reserve(static_cast<std::size_t>(n_frames));
  for (int t = 0; t < n_frames; ++t) {
    const double s = n_frames == 1 ? 0.0 : static_cast<double>(t) / (n_frames - 1);
    const double theta = angle_start + s * (angle_end - angle_start);
    std::array<double, 3> f = {static_cast<double>(center.i), static_cast<double>(center.j),
                               static_cast<double>(center.k)};
    f[plane.first] += r_cells * std::cos(theta);
    f[plane.second] += r_cells * std::sin(theta);
    const GridIndex p = LightGrid::snap(f[0], f[1], f[2]);
    if (!grid.contains(p)) {
      throw InvalidArgument("arc of radius " + std::to_string(radius_cm) +
                            " cm leaves the grid at frame " + std::to_string(t) + " " +
                            describe(p));
    }
    points.push_back(p);
  }
  return {grid, TrajectoryKind::kArc, std::move(points)};
}

MultiLightTrajectory superpose(std::vector<LightTrajectory> tracks,
                               std::vector<double> intensities) {
  if (tracks.empty()) throw InvalidArgument("superpose needs at least one track");
  if (tracks.size() != intensities.size()) {
    throw InvalidArgument("one intensity per track is required");
  }
  for (std::size_t n = 0; n < tracks.size(); ++n) {
    if (tracks[n].points.empty()) throw InvalidArgument("empty track in superposition");
    if (tracks[n].size() != tracks.front().size()) {
      throw InvalidArgument("track " + std::to_string(n) + " has length " +
                            std::to_string(tracks[n].size()) + ", expected " +
                            std::to_string(tracks.front().size()));
    }
    if (!(tracks[n].grid == tracks.front().grid)) {
      throw InvalidArgument("track " + std::to_string(n) + " uses a different grid");
    }
    if (!(intensities[n] > 0.0)) throw InvalidArgument("intensities must be positive");
  }
  return {std::move(tracks), std::move(intensities)};
}

MultiLightTrajectory as_multi(const LightTrajectory& track) {
  return superpose({track}, {1.0});
}

}  // namespace lumiforge
