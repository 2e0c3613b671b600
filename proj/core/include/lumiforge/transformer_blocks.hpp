// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include <torch/torch.h>

namespace lumiforge {

/// Multi-head scaled dot-product attention. Self-attention when context is
/// the query tensor itself.
class MultiHeadAttentionImpl : public torch::nn::Module {
 public:
  MultiHeadAttentionImpl(int d_model, int n_heads, int d_context = -1);

  /// x: (B, N, d_model), context: (B, M, d_context) -> (B, N, d_model)
  torch::Tensor forward(const torch::Tensor& x, const torch::Tensor& context);
  torch::Tensor forward(const torch::Tensor& x) { return forward(x, x); }

 private:
  int n_heads_;
  int head_dim_;
  torch::nn::Linear q_{nullptr}, k_{nullptr}, v_{nullptr}, out_{nullptr};
};
TORCH_MODULE(MultiHeadAttention);

class FeedForwardImpl : public torch::nn::Module {
 public:
  FeedForwardImpl(int d_model, int ratio);
  torch::Tensor forward(const torch::Tensor& x);

 private:
  torch::nn::Linear fc1_{nullptr}, fc2_{nullptr};
};
TORCH_MODULE(FeedForward);

/// Token grid of a latent video: frames x (h / patch) x (w / patch).
struct TokenGrid {
  std::int64_t frames = 0;
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  std::int64_t count() const { return frames * rows * cols; }
};

TokenGrid token_grid(const torch::Tensor& latent, int patch);

/// (B, F, C, h, w) -> (B, F*(h/p)*(w/p), C*p*p), tokens ordered frame-major
/// then row then column.
torch::Tensor patchify(const torch::Tensor& latent, int patch);

/// Inverse of patchify.
torch::Tensor unpatchify(const torch::Tensor& tokens, const TokenGrid& grid, int channels,
                         int patch);

/// Fixed sinusoidal space-time encoding (N, d): the width is split between
/// frame, row and column axes.
torch::Tensor positional_encoding(const TokenGrid& grid, int d_model);

/// Sinusoidal embedding of integer diffusion steps (B,) -> (B, dim).
torch::Tensor timestep_embedding(const torch::Tensor& steps, int dim);

/// x * (1 + scale) + shift with (B, d) modulation broadcast over tokens.
torch::Tensor modulate(const torch::Tensor& x, const torch::Tensor& shift, const torch::Tensor& scale);

}  // namespace lumiforge
