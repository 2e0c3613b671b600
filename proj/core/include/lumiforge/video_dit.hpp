// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <nlohmann/json.hpp>
#include <torch/torch.h>

#include "lumiforge/schedule.hpp"
#include "lumiforge/transformer_blocks.hpp"

namespace lumiforge {

struct DiTConfig {
  int n_layers = 6;
  int d_model = 128;
  int n_heads = 4;
  int patch = 2;
  int mlp_ratio = 4;
  int latent_channels = 4;
  int text_dim = 64;
  int n_text_tokens = 4;
  bool positional_encoding = true;
  ScheduleConfig schedule;

  void validate() const;
  nlohmann::json to_json() const;
  static DiTConfig from_json(const nlohmann::json& doc);
};

/// Hook called on the hidden tokens after every transformer block.
class LayerInjector {
 public:
  virtual ~LayerInjector() = default;
  virtual int layers() const = 0;
  /// hidden: (B, N, d_model). Returns the tensor passed to the next block.
  virtual torch::Tensor apply(int layer, const torch::Tensor& hidden) const = 0;
};

class DiTBlockImpl : public torch::nn::Module {
 public:
  DiTBlockImpl(const DiTConfig& config);

  /// x: (B, N, d), cond: (B, d), text_tokens: (B, M, d).
  torch::Tensor forward(const torch::Tensor& x, const torch::Tensor& cond,
                        const torch::Tensor& text_tokens);

 private:
  torch::nn::LayerNorm norm1_{nullptr}, norm2_{nullptr}, norm3_{nullptr};
  MultiHeadAttention self_attn_{nullptr};
  MultiHeadAttention cross_attn_{nullptr};
  FeedForward mlp_{nullptr};
  torch::nn::Linear ada_{nullptr};
};
TORCH_MODULE(DiTBlock);

/// Text-conditioned epsilon-prediction transformer over patchified latent
/// videos (B, F, C, h, w). Timestep and pooled text modulate every block
/// (adaLN-Zero); text tokens are also attended to by cross-attention.
class VideoDiTImpl : public torch::nn::Module {
 public:
  explicit VideoDiTImpl(const DiTConfig& config);

  const DiTConfig& config() const { return config_; }

  /// z_t: (B, F, C, h, w), t: (B,) integer steps, text: (B, text_dim).
  torch::Tensor forward(const torch::Tensor& z_t, const torch::Tensor& t, const torch::Tensor& text,
                        const LayerInjector* injector = nullptr);

  /// Learned unconditional text vector, (text_dim,).
  const torch::Tensor& null_text() const { return null_text_; }

  /// Rows of text with drop[b] == true replaced by the null vector.
  torch::Tensor text_or_null(const torch::Tensor& text, const torch::Tensor& drop) const;

  /// Null text broadcast to batch size b.
  torch::Tensor null_batch(std::int64_t b) const;

 private:
  DiTConfig config_;
  torch::nn::Linear x_embed_{nullptr};
  torch::nn::Sequential t_embed_{nullptr};
  torch::nn::Linear text_pool_{nullptr};
  torch::nn::Linear text_tokens_{nullptr};
  torch::nn::ModuleList blocks_{nullptr};
  torch::nn::LayerNorm final_norm_{nullptr};
  torch::nn::Linear final_ada_{nullptr};
  torch::nn::Linear out_{nullptr};
  torch::Tensor null_text_;
};
TORCH_MODULE(VideoDiT);

VideoDiT make_dit(const DiTConfig& config, std::uint64_t seed);

void save_dit(const VideoDiT& dit, const std::filesystem::path& path, const nlohmann::json& meta);
VideoDiT load_dit(const std::filesystem::path& path);

}  // namespace lumiforge
