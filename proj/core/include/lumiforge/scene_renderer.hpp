// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <vector>

#include "lumiforge/image.hpp"
#include "lumiforge/light_grid.hpp"

namespace lumiforge {

/// Radiant intensity of a unit-intensity light, in units where a surface
/// facing the light from 65 cm receives I/d^2 ~= 1.
inline constexpr double kDefaultLightPower = 4200.0;
inline constexpr double kAmbient = 0.05;

struct Ray {
  Vec3 origin;
  Vec3 direction;  // unit length
};

/// Axis-aligned ellipsoid.
struct Ellipsoid {
  Vec3 center = Vec3::Zero();
  Vec3 semi_axes = Vec3::Ones();

  /// Nearest positive hit distance along the ray, if any.
  std::optional<double> intersect(const Ray& ray, double t_min = 1e-9) const;
  Vec3 normal_at(const Vec3& point) const;
};

class PinholeCamera {
 public:
  PinholeCamera() = default;
  PinholeCamera(Vec3 position, Vec3 look_at, double vertical_fov, int width, int height);

  const Vec3& position() const { return position_; }
  const Vec3& look_at() const { return look_at_; }
  double vertical_fov() const { return vertical_fov_; }
  int width() const { return width_; }
  int height() const { return height_; }
  const Vec3& forward() const { return forward_; }
  const Vec3& right() const { return right_; }
  const Vec3& up() const { return up_; }

  /// Ray through the center of pixel (x, y); y grows downward.
  Ray pixel_ray(int x, int y) const;

 private:
  Vec3 position_ = Vec3::Zero();
  Vec3 look_at_ = -Vec3::UnitY();
  double vertical_fov_ = 0.45;
  int width_ = 64;
  int height_ = 64;
  Vec3 forward_ = -Vec3::UnitY();
  Vec3 right_ = Vec3::UnitX();
  Vec3 up_ = Vec3::UnitZ();
};

/// Parametric portrait proxy: ellipsoid head with an optional nose, in front of
/// a diffuse wall, seen by a pinhole camera. Lengths in centimeters.
struct SubjectScene {
  int subject_id = 0;
  Ellipsoid head;
  std::optional<Ellipsoid> nose;
  Vec3 albedo_skin = Vec3::Constant(0.7);
  double specular_strength = 0.3;
  double shininess = 32.0;
  Vec3 background_albedo = Vec3::Constant(0.5);
  double wall_distance_cm = 35.0;  // behind the head center, along -y
  double ambient = kAmbient;
  PinholeCamera camera;

  void validate() const;
};

/// Deterministic subject variation seeded by subject_id. Every subject is
/// laterally symmetric and centered on the default grid's centroid.
SubjectScene build_subject(int subject_id, int width = 64, int height = 64);

struct SceneLight {
  Vec3 position;
  double intensity = kDefaultLightPower;
};

struct SurfaceHit {
  Vec3 point;
  Vec3 normal;
  Vec3 albedo;
  bool glossy = false;  // specular lobe only on skin
};

std::optional<SurfaceHit> trace(const SubjectScene& scene, const Ray& ray);

/// True if the segment from the surface point to the light is blocked by the head.
bool occluded(const SubjectScene& scene, const SurfaceHit& hit, const Vec3& light_position);

/// Pre-clamp RGB radiance split by term.
struct ShadingTerms {
  Vec3 ambient = Vec3::Zero();
  Vec3 diffuse = Vec3::Zero();
  Vec3 specular = Vec3::Zero();

  Vec3 total() const { return ambient + diffuse + specular; }
};

/// Shades one surface point as seen along view_dir (pointing toward the eye).
/// Throws InvalidArgument if a light coincides with the point.
ShadingTerms shade_point(const SubjectScene& scene, const SurfaceHit& hit, const Vec3& view_dir,
                         const std::vector<SceneLight>& lights);

/// Per-pixel pre-clamp terms, each an RGB image.
struct FrameTerms {
  Image ambient;
  Image diffuse;
  Image specular;
  Image total() const;
};

FrameTerms shade_frame_terms(const SubjectScene& scene, const std::vector<SceneLight>& lights);

/// Clamped RGB frame in [0,1].
Image shade_frame(const SubjectScene& scene, const std::vector<SceneLight>& lights);

struct FrameSequence {
  std::vector<Image> frames;
  double fps = 8.0;

  std::size_t size() const { return frames.size(); }
};

/// Lights for frame t: track positions with intensity light_power * relative.
std::vector<SceneLight> lights_at(const MultiLightTrajectory& trajectory, std::size_t frame,
                                  double light_power = kDefaultLightPower);

FrameSequence render_video(const SubjectScene& scene, const MultiLightTrajectory& trajectory,
                           double fps, double light_power = kDefaultLightPower);
FrameSequence render_video(const SubjectScene& scene, const LightTrajectory& trajectory,
                           double fps, double light_power = kDefaultLightPower);

}  // namespace lumiforge
