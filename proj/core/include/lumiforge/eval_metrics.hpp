// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "lumiforge/image.hpp"
#include "lumiforge/lighting_repr.hpp"
#include "lumiforge/scene_renderer.hpp"

namespace lumiforge {

/// Pure image -> unit vector map. Implementations must be deterministic.
struct FrameEmbedder {
  std::string name;
  int dim = 0;
  std::function<std::vector<float>(const Image&)> embed;
};

struct TextEmbedder {
  std::string name;
  int dim = 0;
  std::function<std::vector<float>(const std::string&)> embed;
};

/// Area-downsampled frame (16x16x3, centered on 0.5) through a fixed Gaussian
/// projection drawn from seed.
FrameEmbedder random_projection_embedder(int dim = 64, std::uint64_t seed = 0);

/// The hashed bag-of-tokens text embedding.
TextEmbedder hashed_text_embedder(int dim = 64);

double cosine_similarity(const std::vector<float>& a, const std::vector<float>& b);

/// Mean cosine similarity between embeddings of consecutive frames.
double frame_embedding_consistency(const std::vector<Image>& video, const FrameEmbedder& embedder);

/// Multi-scale distance between two frames: at scales 1, 1/2, 1/4, the RMS
/// difference of luminance and signed local gradients, summed over scales.
double perceptual_distance(const Image& a, const Image& b);

/// Mean perceptual_distance over consecutive frame pairs; lower is steadier.
double perceptual_consistency(const std::vector<Image>& video);

struct DirectionEstimate {
  Eigen::Vector2d direction = Eigen::Vector2d::Zero();
  bool valid = false;  // false for all-black frames
};

/// Dead-zone radius, in half-image units, inside which a centroid offset is
/// scaled down rather than normalized.
inline constexpr double kDirectionDeadZone = 0.02;

/// Luminance-weighted centroid of pixels at or above the 90th percentile,
/// relative to the image center in half-image units (x right, y down).
/// Empty for an all-black frame.
std::optional<Eigen::Vector2d> bright_centroid(const Image& frame);

/// bright_centroid scaled to unit length outside the dead zone.
DirectionEstimate estimate_direction(const Image& frame);

struct DirectionReport {
  double rmse = 0.0;
  std::vector<double> per_frame_error;  // NaN where skipped
  int skipped = 0;
};

DirectionReport direction_report(const std::vector<Image>& video,
                                 const std::vector<Image>& reference);
double direction_rmse(const std::vector<Image>& video, const std::vector<Image>& reference);
double direction_rmse(const FrameSequence& video, const CanvasSequence& reference);

inline constexpr int kBrightnessGrid = 8;

/// 8x8 patch mean luminance, normalized to sum 1; uniform for an all-zero frame.
std::vector<double> brightness_distribution(const Image& frame);

/// Per-frame histogram intersection of patch brightness distributions, averaged.
double brightness_consistency(const std::vector<Image>& video, const std::vector<Image>& reference,
                              std::vector<double>* per_frame = nullptr);

double text_video_similarity(const std::vector<Image>& video, const std::string& caption,
                             const FrameEmbedder& image_embedder,
                             const TextEmbedder& text_embedder);

struct MetricsReport {
  double consistency_embed = 0.0;
  double consistency_perceptual = 0.0;
  double direction_rmse = 0.0;
  double brightness_consistency = 0.0;
  std::optional<double> text_similarity;
  std::vector<double> per_frame_direction_error;
  std::vector<double> per_frame_brightness;

  nlohmann::json to_json() const;
  std::string per_frame_csv() const;
};

struct EvaluationInputs {
  std::vector<Image> video;
  std::vector<Image> direction_reference;   // usually canvases
  std::vector<Image> brightness_reference;  // ground-truth frames or canvases
  std::optional<std::string> caption;
};

MetricsReport evaluate(const EvaluationInputs& inputs, const FrameEmbedder& image_embedder,
                       const std::optional<std::pair<FrameEmbedder, TextEmbedder>>& joint = std::nullopt);

std::vector<Image> images_of(const CanvasSequence& seq);

}  // namespace lumiforge
