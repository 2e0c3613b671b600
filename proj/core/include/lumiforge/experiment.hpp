// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lumiforge/dataset_builder.hpp"
#include "lumiforge/eval_metrics.hpp"
#include "lumiforge/latent_codec.hpp"
#include "lumiforge/sampler.hpp"

namespace lumiforge {

/// One evaluation prompt: a subject's appearance in words plus a light path.
struct EvalPair {
  int subject_id = 0;
  MultiLightTrajectory trajectory;
  std::string caption;
};

/// n pairs of fresh linear light paths in front of the subject and caption
/// paraphrases drawn with seeds the dataset never used.
std::vector<EvalPair> heldout_pairs(const DatasetManifest& manifest, int n, int n_frames,
                                    std::uint64_t seed);

/// Renderer ground truth for a pair: subject frames and canvases.
struct PairReference {
  std::vector<Image> frames;
  std::vector<Image> canvases;
};

PairReference render_reference(const EvalPair& pair, int resolution, double fps = 8.0);

/// Caption-space frame embedder backed by the codec's text head.
FrameEmbedder codec_frame_embedder(const LatentCodec& codec);

struct PipelineModels {
  LatentCodec codec{nullptr};
  SamplerModels diffusion;
};

/// Samples one video for the pair and scores it against the renderer.
struct PairResult {
  std::vector<Image> video;
  MetricsReport report;
};

PairResult sample_and_evaluate(PipelineModels& models, const EvalPair& pair,
                               const PairReference& reference, const SampleConfig& config);

struct SweepRow {
  std::string label;
  double light_scale = 0.0;
  double consistency_embed = 0.0;
  double consistency_perceptual = 0.0;
  double direction_rmse = 0.0;
  double brightness_consistency = 0.0;
  double text_similarity = 0.0;
};

struct SweepTable {
  std::vector<SweepRow> rows;

  nlohmann::json to_json() const;
  /// Fixed-width text grouped as consistency / accuracy / quality.
  std::string to_text() const;
};

/// Averages of sample_and_evaluate over all pairs.
SweepRow evaluate_pairs(PipelineModels& models, const std::vector<EvalPair>& pairs,
                        const SampleConfig& config, const std::string& label);

SweepTable light_scale_sweep(PipelineModels& models, const std::vector<EvalPair>& pairs,
                             const std::vector<double>& scales, const SampleConfig& base);

/// Mean over border patches and channels of the across-video variance of the
/// patch's mean color, for videos of equal shape (one per sampling seed).
/// Border patches are the outer ring of a kBrightnessGrid x kBrightnessGrid grid.
double border_diversity(const std::vector<std::vector<Image>>& videos);

/// Spearman rank correlation (average ranks for ties).
double spearman(const std::vector<double>& x, const std::vector<double>& y);

/// Horizontal contact sheet of the frames.
Image film_strip(const std::vector<Image>& frames);

}  // namespace lumiforge
