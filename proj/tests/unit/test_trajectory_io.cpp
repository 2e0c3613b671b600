// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>

#include <gtest/gtest.h>

#include "lumiforge/error.hpp"
#include "lumiforge/trajectory_io.hpp"
#include "test_support.hpp"

namespace lumiforge {
namespace {

TEST(TrajectoryIo, SingleTrackRoundTrip) {
  testing::TempDir dir("traj");
  const auto t = as_multi(linear_trajectory(default_grid(), {0, 16, 16}, {32, 16, 16}, 16));
  save_trajectory(t, dir / "t.json");
  const auto back = load_trajectory(dir / "t.json");
  ASSERT_EQ(back.tracks.size(), 1u);
  EXPECT_EQ(back.tracks[0].points, t.tracks[0].points);
  EXPECT_EQ(back.tracks[0].kind, TrajectoryKind::kHorizontal);
  EXPECT_EQ(back.grid(), t.grid());
  EXPECT_EQ(back.intensities, t.intensities);
}

TEST(TrajectoryIo, MultiTrackRoundTrip) {
  const LightGrid g = default_grid();
  const auto m = superpose({linear_trajectory(g, {0, 16, 16}, {32, 16, 16}, 8),
                            arc_trajectory(g, {16, 16, 16}, 40, AxisPair{0, 2}, 0, 3, 8)},
                           {1.0, 0.5});
  const auto back = trajectory_from_json(trajectory_to_json(m));
  ASSERT_EQ(back.tracks.size(), 2u);
  EXPECT_EQ(back.tracks[1].kind, TrajectoryKind::kArc);
  EXPECT_EQ(back.tracks[1].points, m.tracks[1].points);
  EXPECT_EQ(back.intensities, m.intensities);
}

TEST(TrajectoryIo, RejectsOutOfBoundsPoints) {
  auto doc = trajectory_to_json(as_multi(linear_trajectory(default_grid(), {0, 0, 0}, {1, 0, 0}, 2)));
  doc["points"][0] = {40, 0, 0};
  EXPECT_THROW(trajectory_from_json(doc), Error);
}

TEST(TrajectoryIo, MissingFileIsReported) {
  EXPECT_THROW(load_trajectory("/nonexistent/trajectory.json"), Error);
}

TEST(TrajectoryIo, MalformedDocument) {
  testing::TempDir dir("traj");
  std::ofstream(dir / "bad.json") << "{ not json";
  EXPECT_THROW(load_trajectory(dir / "bad.json"), Error);
  EXPECT_THROW(trajectory_from_json(nlohmann::json::object()), Error);
}

}  // namespace
}  // namespace lumiforge
