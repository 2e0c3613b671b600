// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>
#include <torch/torch.h>

#include "lumiforge/latent_codec.hpp"
#include "lumiforge/light_encoder.hpp"
#include "lumiforge/video_dit.hpp"

namespace lumiforge {

struct SampleConfig {
  int t_infer = 50;
  double w = 7.5;
  double light_scale = kDefaultLightScale;
  std::uint64_t seed = 0;
  int n_frames = 16;
  int resolution = 64;

  void validate(int t_train) const;
  nlohmann::json to_json() const;
};

/// eps_uncond + w (eps_cond - eps_uncond); w == 1 and w == 0 return the
/// corresponding input unchanged.
torch::Tensor cfg_combine(const torch::Tensor& eps_cond, const torch::Tensor& eps_uncond, double w);

/// Uniformly strided steps t_k = floor(k T / n) + 1, ascending.
std::vector<int> ddim_timesteps(int t_train, int t_infer);

/// Everything the reverse process needs besides the sampling config.
struct SamplerModels {
  VideoDiT backbone{nullptr};
  LightEncoder light{nullptr};  // may be null: backbone only
};

/// Deterministic DDIM (eta = 0) from seeded Gaussian noise. text: (1, text_dim);
/// canvas_latents: (1, F, C, h, w), ignored without a light encoder.
/// Returns the final latent (1, F, C, h, w).
torch::Tensor sample_latent(SamplerModels& models, const torch::Tensor& text,
                            const torch::Tensor& canvas_latents, const SampleConfig& config,
                            const std::vector<std::int64_t>& latent_shape);

/// Same, starting from the given noise instead of the seeded draw.
torch::Tensor sample_latent_from(SamplerModels& models, const torch::Tensor& text,
                                 const torch::Tensor& canvas_latents, const SampleConfig& config,
                                 torch::Tensor z);

/// Caption embedding and canvases (F, H, W, 1) in, decoded video (F, H, W, 3) out.
torch::Tensor sample_video(SamplerModels& models, const LatentCodec& codec, const torch::Tensor& text,
                           const torch::Tensor& canvases_nhwc, const SampleConfig& config);

}  // namespace lumiforge
