// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "lumiforge/transformer_blocks.hpp"

#include <cmath>

#include "lumiforge/error.hpp"

namespace lumiforge {

MultiHeadAttentionImpl::MultiHeadAttentionImpl(int d_model, int n_heads, int d_context)
    : n_heads_(n_heads), head_dim_(n_heads > 0 ? d_model / n_heads : 0) {
  if (n_heads < 1 || d_model % n_heads != 0) {
    throw InvalidArgument("d_model " + std::to_string(d_model) + " not divisible by " +
                          std::to_string(n_heads) + " heads");
  }
  if (d_context < 0) d_context = d_model;
  q_ = register_module("q", torch::nn::Linear(d_model, d_model));
  k_ = register_module("k", torch::nn::Linear(d_context, d_model));
  v_ = register_module("v", torch::nn::Linear(d_context, d_model));
  out_ = register_module("out", torch::nn::Linear(d_model, d_model));
}

torch::Tensor MultiHeadAttentionImpl::forward(const torch::Tensor& x, const torch::Tensor& context) {
  const auto B = x.size(0);
  const auto N = x.size(1);
  const auto M = context.size(1);
  auto split = [&](const torch::Tensor& t, std::int64_t len) {
    return t.view({B, len, n_heads_, head_dim_}).transpose(1, 2);
  };
  auto q = split(q_->forward(x), N);
  auto k = split(k_->forward(context), M);
  auto v = split(v_->forward(context), M);
  auto scores = torch::matmul(q, k.transpose(-2, -1)) / std::sqrt(static_cast<double>(head_dim_));
  auto attn = torch::softmax(scores, -1);
  auto out = torch::matmul(attn, v).transpose(1, 2).reshape({B, N, n_heads_ * head_dim_});
  return out_->forward(out);
}

FeedForwardImpl::FeedForwardImpl(int d_model, int ratio) {
  fc1_ = register_module("fc1", torch::nn::Linear(d_model, d_model * ratio));
  fc2_ = register_module("fc2", torch::nn::Linear(d_model * ratio, d_model));
}

torch::Tensor FeedForwardImpl::forward(const torch::Tensor& x) {
  return fc2_->forward(torch::gelu(fc1_->forward(x), "tanh"));
}

TokenGrid token_grid(const torch::Tensor& latent, int patch) {
  if (latent.dim() != 5) throw InvalidArgument("latent batch must be (B, F, C, h, w)");
  if (latent.size(3) % patch != 0 || latent.size(4) % patch != 0) {
    throw InvalidArgument("latent " + std::to_string(latent.size(3)) + "x" +
                          std::to_string(latent.size(4)) + " not divisible by patch " +
                          std::to_string(patch));
  }
  return {latent.size(1), latent.size(3) / patch, latent.size(4) / patch};
}

torch::Tensor patchify(const torch::Tensor& latent, int patch) {
  const TokenGrid g = token_grid(latent, patch);
  const auto B = latent.size(0);
  const auto C = latent.size(2);
  // (B, F, C, R, p, Q, p) -> (B, F, R, Q, C, p, p)
  return latent.reshape({B, g.frames, C, g.rows, patch, g.cols, patch})
      .permute({0, 1, 3, 5, 2, 4, 6})
      .reshape({B, g.count(), C * patch * patch});
}

torch::Tensor unpatchify(const torch::Tensor& tokens, const TokenGrid& grid, int channels,
                         int patch) {
  const auto B = tokens.size(0);
  return tokens.reshape({B, grid.frames, grid.rows, grid.cols, channels, patch, patch})
      .permute({0, 1, 4, 2, 5, 3, 6})
      .reshape({B, grid.frames, channels, grid.rows * patch, grid.cols * patch});
}

namespace {

// (n,) positions -> (n, dim) sin/cos features; dim must be even.
torch::Tensor axis_encoding(std::int64_t n, std::int64_t dim) {
  auto out = torch::zeros({n, dim});
  if (dim == 0) return out;
  auto pos = torch::arange(n, torch::kFloat64).unsqueeze(1);
  auto freq = torch::exp(torch::arange(0, dim / 2, torch::kFloat64) *
                         (-std::log(10000.0) / std::max<std::int64_t>(dim / 2, 1)));
  auto angles = pos * freq.unsqueeze(0);
  out.slice(1, 0, dim / 2) = torch::sin(angles).to(torch::kFloat32);
  out.slice(1, dim / 2, dim) = torch::cos(angles).to(torch::kFloat32);
  return out;
}

}  // namespace

torch::Tensor positional_encoding(const TokenGrid& grid, int d_model) {
  const std::int64_t d_space = 2 * (d_model / 6);
  const std::int64_t d_time = d_model - 2 * d_space;
  auto et = axis_encoding(grid.frames, d_time - (d_time % 2));
  auto ey = axis_encoding(grid.rows, d_space);
  auto ex = axis_encoding(grid.cols, d_space);
  auto t = et.view({grid.frames, 1, 1, -1}).expand({grid.frames, grid.rows, grid.cols, et.size(1)});
  auto y = ey.view({1, grid.rows, 1, -1}).expand({grid.frames, grid.rows, grid.cols, d_space});
  auto x = ex.view({1, 1, grid.cols, -1}).expand({grid.frames, grid.rows, grid.cols, d_space});
  auto pe = torch::cat({t, y, x}, -1).reshape({grid.count(), -1});
  if (pe.size(1) < d_model) pe = torch::cat({pe, torch::zeros({grid.count(), d_model - pe.size(1)})}, 1);
  return pe;
}

torch::Tensor timestep_embedding(const torch::Tensor& steps, int dim) {
  const int half = dim / 2;
  auto freq = torch::exp(torch::arange(0, half, torch::kFloat64) *
                         (-std::log(10000.0) / std::max(half, 1)));
  auto angles = steps.to(torch::kFloat64).unsqueeze(1) * freq.unsqueeze(0);
  auto emb = torch::cat({torch::cos(angles), torch::sin(angles)}, 1);
  if (emb.size(1) < dim) emb = torch::cat({emb, torch::zeros({emb.size(0), 1}, torch::kFloat64)}, 1);
  return emb.to(torch::kFloat32);
}

torch::Tensor modulate(const torch::Tensor& x, const torch::Tensor& shift, const torch::Tensor& scale) {
  return x * (1.0 + scale.unsqueeze(1)) + shift.unsqueeze(1);
}

}  // namespace lumiforge
