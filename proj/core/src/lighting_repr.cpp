// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "lumiforge/lighting_repr.hpp"

#include <cmath>

namespace lumiforge {

CanvasGeometry default_canvas_geometry(int width, int height) {
  // Same placement as every subject built by build_subject.
  const SubjectScene reference = build_subject(0, width, height);
  CanvasGeometry geometry;
  geometry.camera = reference.camera;
  geometry.plane_point = reference.head.center;
  geometry.plane_normal = -reference.camera.forward();
  return geometry;
}

Image render_canvas_linear(const Vec3& light_position_cm, double intensity,
                           const CanvasGeometry& geometry) {
  if (!(intensity > 0.0)) throw InvalidArgument("canvas light intensity must be positive");
  const Vec3& n = geometry.plane_normal;
  if (n.dot(light_position_cm - geometry.plane_point) == 0.0) {
    throw InvalidArgument("light lies on the canvas plane");
  }
  const PinholeCamera& cam = geometry.camera;
  Image canvas(cam.width(), cam.height(), 1);
  for (int y = 0; y < cam.height(); ++y) {
    for (int x = 0; x < cam.width(); ++x) {
      const Ray ray = cam.pixel_ray(x, y);
      const double denom = n.dot(ray.direction);
      if (denom == 0.0) continue;
      const double t = n.dot(geometry.plane_point - ray.origin) / denom;
      if (t <= 0.0) continue;
      const Vec3 point = ray.origin + t * ray.direction;
      const Vec3 to_light = light_position_cm - point;
      const double d2 = to_light.squaredNorm();
      const double cosine = n.dot(to_light) / std::sqrt(d2);
      if (cosine <= 0.0) continue;
      canvas.at(x, y) = static_cast<float>(intensity / d2 * cosine);
    }
  }
  return canvas;
}

CanvasImage render_canvas(const Vec3& light_position_cm, double intensity,
                          const CanvasGeometry& geometry) {
  CanvasImage out{render_canvas_linear(light_position_cm, intensity, geometry), {light_position_cm}};
  out.pixels.clamp01();
  return out;
}

Image render_canvas_frame_linear(const MultiLightTrajectory& trajectory, std::size_t frame,
                                 const CanvasGeometry& geometry) {
  Image sum;
  for (const auto& light : lights_at(trajectory, frame, geometry.light_power)) {
    Image one = render_canvas_linear(light.position, light.intensity, geometry);
    if (sum.empty()) {
      sum = std::move(one);
      continue;
    }
    auto dst = sum.data();
    auto src = one.data();
    for (std::size_t n = 0; n < dst.size(); ++n) dst[n] += src[n];
  }
  return sum;
}

CanvasSequence render_canvas_sequence(const MultiLightTrajectory& trajectory,
                                      const CanvasGeometry& geometry) {
  if (trajectory.size() == 0) throw InvalidArgument("trajectory is empty");
  CanvasSequence seq;
  seq.canvases.reserve(trajectory.size());
  for (std::size_t t = 0; t < trajectory.size(); ++t) {
    CanvasImage canvas;
    canvas.pixels = render_canvas_frame_linear(trajectory, t, geometry);
    canvas.pixels.clamp01();
    for (const auto& light : lights_at(trajectory, t, geometry.light_power)) {
      canvas.light_positions_cm.push_back(light.position);
    }
    seq.canvases.push_back(std::move(canvas));
  }
  return seq;
}

CanvasSequence render_canvas_sequence(const LightTrajectory& trajectory,
                                      const CanvasGeometry& geometry) {
  return render_canvas_sequence(as_multi(trajectory), geometry);
}

}  // namespace lumiforge
