// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include <nlohmann/json.hpp>
#include <torch/torch.h>

#include "lumiforge/checkpoint.hpp"

namespace lumiforge {

struct CodecConfig {
  int downsample = 4;       // spatial factor f, a power of two
  int latent_channels = 4;  // C_lat
  double kl_weight = 1e-6;
  int base_channels = 32;
  int text_dim = 64;  // width of the caption co-embedding head

  void validate() const;
  nlohmann::json to_json() const;
  static CodecConfig from_json(const nlohmann::json& doc);
};

/// Latent video (n_frames, C_lat, H/f, W/f), already multiplied by the codec's
/// latent scale.
struct LatentVideo {
  torch::Tensor data;
  int downsample = 4;
  int channels = 4;

  std::int64_t frames() const { return data.size(0); }
};

/// Per-frame convolutional VAE shared by subject frames and lighting canvases.
class LatentCodecImpl : public torch::nn::Module {
 public:
  explicit LatentCodecImpl(const CodecConfig& config);

  const CodecConfig& config() const { return config_; }

  /// (N, 3, H, W) in [0,1] -> posterior mean and log-variance, (N, C_lat, h, w).
  std::pair<torch::Tensor, torch::Tensor> moments(const torch::Tensor& nchw) const;
  /// (N, C_lat, h, w) -> unclamped (N, 3, H, W).
  torch::Tensor decode_raw(const torch::Tensor& latent_nchw) const;

  /// Video (F, H, W, 3) or canvases (F, H, W, 1) -> scaled posterior mean.
  LatentVideo encode(const torch::Tensor& video_nhwc) const;
  /// Scaled latent -> clamped video (F, H, W, 3).
  torch::Tensor decode(const LatentVideo& latent) const;

  /// Caption-space embedding of frames (N, 3, H, W) -> (N, text_dim), unit rows.
  torch::Tensor embed_frames(const torch::Tensor& nchw) const;
  /// Same head applied to unscaled posterior means (N, C_lat, h, w).
  torch::Tensor embed_latent_mean(const torch::Tensor& mean) const;

  double latent_scale() const { return latent_scale_.item<double>(); }
  void set_latent_scale(double scale);

 private:
  void check_input(const torch::Tensor& nhwc) const;

  CodecConfig config_;
  mutable torch::nn::Sequential encoder_{nullptr};
  mutable torch::nn::Sequential decoder_{nullptr};
  mutable torch::nn::Linear text_head_{nullptr};
  torch::Tensor latent_scale_;
};
TORCH_MODULE(LatentCodec);

LatentCodec make_codec(const CodecConfig& config, std::uint64_t seed);

struct CodecTrainOptions {
  int steps = 1000;
  int batch = 8;
  double lr = 1e-3;
  std::uint64_t seed = 0;
};

struct CodecTrainingData {
  torch::Tensor frames;    // (N, H, W, 3)
  torch::Tensor canvases;  // (M, H, W, 1), may be undefined
  torch::Tensor caption_embeddings;  // (N, text_dim) target per frame, may be undefined
};

struct CodecStepLog {
  int step = 0;
  double loss = 0.0;
  double recon_mse = 0.0;
  double kl = 0.0;
};

/// Reconstruction MSE + kl_weight * KL on frames and canvases; the caption head
/// is fitted on detached latents. Sets the latent scale to 1/std of frame
/// latents at the end. steps == 0 leaves the codec untouched.
std::vector<CodecStepLog> train_codec(LatentCodec& codec, const CodecTrainingData& data,
                                      const CodecTrainOptions& options,
                                      const std::function<void(const CodecStepLog&)>& on_step = {});

/// Mean absolute reconstruction error of decode(encode(x)).
double reconstruction_mae(const LatentCodec& codec, const torch::Tensor& video_nhwc);

void save_codec(const LatentCodec& codec, const std::filesystem::path& path,
                const nlohmann::json& meta);
LatentCodec load_codec(const std::filesystem::path& path);

}  // namespace lumiforge
