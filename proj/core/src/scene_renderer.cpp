// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "lumiforge/scene_renderer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lumiforge/rng.hpp"

namespace lumiforge {

std::optional<double> Ellipsoid::intersect(const Ray& ray, double t_min) const {
  const Vec3 o = (ray.origin - center).cwiseQuotient(semi_axes);
  const Vec3 d = ray.direction.cwiseQuotient(semi_axes);
  const double a = d.squaredNorm();
  const double b = o.dot(d);
  const double c = o.squaredNorm() - 1.0;
  const double disc = b * b - a * c;
  if (disc < 0.0) return std::nullopt;
  const double root = std::sqrt(disc);
  const double t0 = (-b - root) / a;
  if (t0 > t_min) return t0;
  const double t1 = (-b + root) / a;
  if (t1 > t_min) return t1;
  return std::nullopt;
}

Vec3 Ellipsoid::normal_at(const Vec3& point) const {
  return (point - center).cwiseQuotient(semi_axes.cwiseProduct(semi_axes)).normalized();
}

PinholeCamera::PinholeCamera(Vec3 position, Vec3 look_at, double vertical_fov, int width,
                             int height)
    : position_(std::move(position)), look_at_(std::move(look_at)),
      vertical_fov_(vertical_fov), width_(width), height_(height) {
  if (width < 16 || height < 16) throw InvalidArgument("camera image must be at least 16x16");
  if (!(vertical_fov > 0.0 && vertical_fov < M_PI)) {
    throw InvalidArgument("vertical field of view must lie in (0, pi)");
  }
  forward_ = (look_at_ - position_).normalized();
  // Screen-right is up x forward so that the lattice i axis maps to image x.
  right_ = Vec3::UnitZ().cross(forward_).normalized();
  up_ = forward_.cross(right_).normalized();
}

Ray PinholeCamera::pixel_ray(int x, int y) const {
  const double half_h = std::tan(0.5 * vertical_fov_);
  const double aspect = static_cast<double>(width_) / height_;
  const double u = (2.0 * (x + 0.5) / width_ - 1.0) * half_h * aspect;
  const double v = (1.0 - 2.0 * (y + 0.5) / height_) * half_h;
  return {position_, (forward_ + u * right_ + v * up_).normalized()};
}

void SubjectScene::validate() const {
  auto in_unit = [](const Vec3& c) { return (c.array() >= 0.0).all() && (c.array() <= 1.0).all(); };
  if (!(head.semi_axes.array() > 0.0).all()) throw InvalidArgument("head semi-axes must be positive");
  if (nose && !(nose->semi_axes.array() > 0.0).all()) {
    throw InvalidArgument("nose semi-axes must be positive");
  }
  if (!in_unit(albedo_skin) || !in_unit(background_albedo)) {
    throw InvalidArgument("albedos must lie in [0,1]^3");
  }
  if (specular_strength < 0.0 || specular_strength > 1.0) {
    throw InvalidArgument("specular strength must lie in [0,1]");
  }
  if (!(shininess > 0.0)) throw InvalidArgument("shininess must be positive");
  if (camera.width() < 16 || camera.height() < 16) throw InvalidArgument("image dims must be >= 16");
}

SubjectScene build_subject(int subject_id, int width, int height) {
  if (subject_id < 0) throw InvalidArgument("subject_id must be non-negative");
  Rng rng(mix_seed(static_cast<std::uint64_t>(subject_id), 0x5CE7E));
  const Vec3 head_center = default_grid().centroid();

  SubjectScene scene;
  scene.subject_id = subject_id;
  scene.head.center = head_center;
  scene.head.semi_axes = Vec3(9.0 * rng.uniform(0.85, 1.15), 10.0 * rng.uniform(0.85, 1.15),
                              12.0 * rng.uniform(0.85, 1.15));

  const double nose_scale = rng.uniform(0.8, 1.2);
  Ellipsoid nose;
  nose.semi_axes = Vec3(1.4, 2.4, 3.0) * nose_scale;
  nose.center = head_center + Vec3(0.0, 0.9 * scene.head.semi_axes.y(),
                                   -0.1 * scene.head.semi_axes.z());
  scene.nose = nose;

  // Skin tone: blend from light to deep, then a small warm/cool hue shift.
  const Vec3 light_tone(0.95, 0.80, 0.70);
  const Vec3 deep_tone(0.45, 0.30, 0.22);
  const double tone = rng.uniform();
  const double hue = rng.uniform(-0.05, 0.05);
  scene.albedo_skin = (light_tone + tone * (deep_tone - light_tone) + Vec3(hue, 0.0, -hue))
                          .cwiseMax(0.0)
                          .cwiseMin(1.0);
  scene.specular_strength = rng.uniform(0.15, 0.45);
  scene.shininess = rng.uniform(16.0, 64.0);
  scene.background_albedo = Vec3(rng.uniform(0.2, 0.8), rng.uniform(0.2, 0.8), rng.uniform(0.2, 0.8));

  scene.camera = PinholeCamera(head_center + Vec3(0.0, 100.0, 0.0), head_center, 0.45, width, height);
  scene.validate();
  return scene;
}

namespace {

struct Candidate {
  double t = std::numeric_limits<double>::infinity();
  const Ellipsoid* shape = nullptr;
};

Vec3 wall_point_normal() { return Vec3::UnitY(); }

}  // namespace

std::optional<SurfaceHit> trace(const SubjectScene& scene, const Ray& ray) {
  Candidate best;
  if (auto t = scene.head.intersect(ray)) best = {*t, &scene.head};
  if (scene.nose) {
    if (auto t = scene.nose->intersect(ray); t && *t < best.t) best = {*t, &*scene.nose};
  }
  if (best.shape) {
    const Vec3 p = ray.origin + best.t * ray.direction;
    return SurfaceHit{p, best.shape->normal_at(p), scene.albedo_skin, true};
  }
  const double wall_y = scene.head.center.y() - scene.wall_distance_cm;
  if (ray.direction.y() < 0.0) {
    const double t = (wall_y - ray.origin.y()) / ray.direction.y();
    if (t > 0.0) {
      return SurfaceHit{ray.origin + t * ray.direction, wall_point_normal(),
                        scene.background_albedo, false};
    }
  }
  return std::nullopt;
}

bool occluded(const SubjectScene& scene, const SurfaceHit& hit, const Vec3& light_position) {
  const Vec3 to_light = light_position - hit.point;
  const double dist = to_light.norm();
  const Ray shadow{hit.point + 1e-6 * hit.normal, to_light / dist};
  const double limit = dist - 1e-6;
  if (auto t = scene.head.intersect(shadow, 1e-9); t && *t < limit) return true;
  if (scene.nose) {
    if (auto t = scene.nose->intersect(shadow, 1e-9); t && *t < limit) return true;
  }
  return false;
}

ShadingTerms shade_point(const SubjectScene& scene, const SurfaceHit& hit, const Vec3& view_dir,
                         const std::vector<SceneLight>& lights) {
  ShadingTerms terms;
  terms.ambient = scene.ambient * hit.albedo;
  for (const auto& light : lights) {
    if (!(light.intensity > 0.0)) throw InvalidArgument("light intensity must be positive");
    const Vec3 to_light = light.position - hit.point;
    const double d2 = to_light.squaredNorm();
    if (d2 == 0.0) throw InvalidArgument("light coincides with a surface point");
    const Vec3 l = to_light / std::sqrt(d2);
    const double n_dot_l = hit.normal.dot(l);
    if (n_dot_l <= 0.0 || occluded(scene, hit, light.position)) continue;
    const double irradiance = light.intensity / d2;
    terms.diffuse += irradiance * n_dot_l * hit.albedo;
    if (hit.glossy) {
      const Vec3 h = (l + view_dir).normalized();
      const double n_dot_h = std::max(0.0, hit.normal.dot(h));
      terms.specular += Vec3::Constant(irradiance * scene.specular_strength *
                                       std::pow(n_dot_h, scene.shininess));
    }
  }
  return terms;
}

Image FrameTerms::total() const {
  Image out = ambient;
  auto d = diffuse.data();
  auto s = specular.data();
  auto o = out.data();
  for (std::size_t n = 0; n < o.size(); ++n) o[n] += d[n] + s[n];
  return out;
}

FrameTerms shade_frame_terms(const SubjectScene& scene, const std::vector<SceneLight>& lights) {
  if (lights.empty()) throw InvalidArgument("shade_frame needs at least one light");
  const int w = scene.camera.width();
  const int h = scene.camera.height();
  FrameTerms out{Image(w, h, 3), Image(w, h, 3), Image(w, h, 3)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Ray ray = scene.camera.pixel_ray(x, y);
      const auto hit = trace(scene, ray);
      if (!hit) continue;
      const ShadingTerms t = shade_point(scene, *hit, -ray.direction, lights);
      for (int c = 0; c < 3; ++c) {
        out.ambient.at(x, y, c) = static_cast<float>(t.ambient[c]);
        out.diffuse.at(x, y, c) = static_cast<float>(t.diffuse[c]);
        out.specular.at(x, y, c) = static_cast<float>(t.specular[c]);
      }
    }
  }
  return out;
}

Image shade_frame(const SubjectScene& scene, const std::vector<SceneLight>& lights) {
  Image frame = shade_frame_terms(scene, lights).total();
  frame.clamp01();
  return frame;
}

std::vector<SceneLight> lights_at(const MultiLightTrajectory& trajectory, std::size_t frame,
                                  double light_power) {
  std::vector<SceneLight> lights;
  lights.reserve(trajectory.tracks.size());
  for (std::size_t n = 0; n < trajectory.tracks.size(); ++n) {
    const auto& track = trajectory.tracks[n];
    lights.push_back({track.grid.world_position(track.points.at(frame)),
                      light_power * trajectory.intensities[n]});
  }
  return lights;
}

FrameSequence render_video(const SubjectScene& scene, const MultiLightTrajectory& trajectory,
                           double fps, double light_power) {
  if (trajectory.size() == 0) throw InvalidArgument("trajectory is empty");
  if (!(fps > 0.0)) throw InvalidArgument("fps must be positive");
  FrameSequence video;
  video.fps = fps;
  video.frames.reserve(trajectory.size());
  for (std::size_t t = 0; t < trajectory.size(); ++t) {
    video.frames.push_back(shade_frame(scene, lights_at(trajectory, t, light_power)));
  }
  return video;
}

FrameSequence render_video(const SubjectScene& scene, const LightTrajectory& trajectory,
                           double fps, double light_power) {
  return render_video(scene, as_multi(trajectory), fps, light_power);
}

}  // namespace lumiforge
