// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "lumiforge/image.hpp"
#include "lumiforge/light_grid.hpp"
#include "lumiforge/scene_renderer.hpp"

namespace lumiforge {

/// A camera-facing plane through the head center, seen by the subject camera.
struct CanvasGeometry {
  PinholeCamera camera;
  Vec3 plane_point = Vec3::Zero();
  Vec3 plane_normal = Vec3::UnitY();  // unit, facing the camera
  double light_power = kDefaultLightPower;
};

/// Geometry shared by every subject: the canvas encodes lights, never identity.
CanvasGeometry default_canvas_geometry(int width = 64, int height = 64);

struct CanvasImage {
  Image pixels;  // single channel, [0,1]
  std::vector<Vec3> light_positions_cm;
};

struct CanvasSequence {
  std::vector<CanvasImage> canvases;

  std::size_t size() const { return canvases.size(); }
};

/// Lambertian irradiance I/d^2 * max(0, n.l) on the canvas plane, not clamped.
/// Throws InvalidArgument when the light lies on the plane.
Image render_canvas_linear(const Vec3& light_position_cm, double intensity,
                           const CanvasGeometry& geometry);

CanvasImage render_canvas(const Vec3& light_position_cm, double intensity,
                          const CanvasGeometry& geometry);

/// Sum of per-light canvases for frame t, not clamped.
Image render_canvas_frame_linear(const MultiLightTrajectory& trajectory, std::size_t frame,
                                 const CanvasGeometry& geometry);

CanvasSequence render_canvas_sequence(const MultiLightTrajectory& trajectory,
                                      const CanvasGeometry& geometry);
CanvasSequence render_canvas_sequence(const LightTrajectory& trajectory,
                                      const CanvasGeometry& geometry);

}  // namespace lumiforge
