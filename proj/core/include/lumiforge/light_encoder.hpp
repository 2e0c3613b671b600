// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <nlohmann/json.hpp>
#include <torch/torch.h>

#include "lumiforge/transformer_blocks.hpp"
#include "lumiforge/video_dit.hpp"

namespace lumiforge {

inline constexpr double kDefaultLightScale = 0.5;

struct LightEncoderConfig {
  int n_layers = 6;
  int d_model = 128;
  int n_heads = 4;
  int patch = 2;
  int mlp_ratio = 4;
  int latent_channels = 4;
  bool positional_encoding = true;
  double guidance_scale_default = kDefaultLightScale;

  /// Layer count, width and token grid copied from the backbone.
  static LightEncoderConfig matching(const DiTConfig& backbone);

  void validate() const;
  /// Throws unless layer count, width, patch and channels equal the backbone's.
  void check_pairing(const DiTConfig& backbone) const;
  nlohmann::json to_json() const;
  static LightEncoderConfig from_json(const nlohmann::json& doc);
};

/// One (B, N, d_model) tensor per backbone layer.
struct LightConditionSequence {
  std::vector<torch::Tensor> per_layer;
  std::size_t size() const { return per_layer.size(); }
};

class LightBlockImpl : public torch::nn::Module {
 public:
  LightBlockImpl(int d_model, int n_heads, int mlp_ratio);
  torch::Tensor forward(const torch::Tensor& x);

 private:
  torch::nn::LayerNorm norm1_{nullptr}, norm2_{nullptr};
  MultiHeadAttention attn_{nullptr};
  FeedForward mlp_{nullptr};
};
TORCH_MODULE(LightBlock);

/// Transformer over canvas latents with a zero-initialized output projection
/// per layer, plus the per-layer merge Linear(h + s * c), identity-initialized.
class LightEncoderImpl : public torch::nn::Module {
 public:
  explicit LightEncoderImpl(const LightEncoderConfig& config);

  const LightEncoderConfig& config() const { return config_; }

  /// canvas_latents: (B, F, C, h, w).
  LightConditionSequence encode(const torch::Tensor& canvas_latents);

  torch::Tensor merge(int layer, const torch::Tensor& h, const torch::Tensor& c, double scale) const;

 private:
  LightEncoderConfig config_;
  torch::nn::Linear embed_{nullptr};
  torch::nn::ModuleList blocks_{nullptr};
  torch::nn::ModuleList out_proj_{nullptr};
  mutable torch::nn::ModuleList merges_{nullptr};
};
TORCH_MODULE(LightEncoder);

LightEncoder make_light_encoder(const LightEncoderConfig& config, std::uint64_t seed);

/// Applies the encoder's merges to backbone hidden states. Conditions with a
/// batch of one are broadcast over the hidden batch.
class LightInjector final : public LayerInjector {
 public:
  LightInjector(const LightEncoderImpl& encoder, LightConditionSequence conditions, double scale);
  int layers() const override { return static_cast<int>(conditions_.size()); }
  torch::Tensor apply(int layer, const torch::Tensor& hidden) const override;

 private:
  const LightEncoderImpl& encoder_;
  LightConditionSequence conditions_;
  double scale_;
};

void save_light_encoder(const LightEncoder& encoder, const std::filesystem::path& path,
                        const nlohmann::json& meta);
LightEncoder load_light_encoder(const std::filesystem::path& path);

}  // namespace lumiforge
