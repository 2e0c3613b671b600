// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "lumiforge/losses.hpp"

#include "lumiforge/error.hpp"

namespace lumiforge {

std::pair<torch::Tensor, torch::Tensor> channel_statistics(const torch::Tensor& x, int channel_dim) {
  if (x.dim() < 3 || channel_dim < 1 || channel_dim >= x.dim()) {
    throw InvalidArgument("statistics need (B, ..., C, ...) input with a non-batch channel axis");
  }
  const auto B = x.size(0);
  const auto C = x.size(channel_dim);
  // (B, C, positions). Sorting makes the float sums independent of position order.
  auto flat = x.movedim(channel_dim, 1).reshape({B, C, -1}).to(torch::kFloat64);
  if (flat.size(2) < 2) throw InvalidArgument("standard deviation needs at least 2 positions per channel");
  auto sorted = std::get<0>(flat.sort(2));
  auto mu = sorted.mean(2);
  // Two-pass variance: a constant shift leaves the centered values untouched.
  auto centered = sorted - mu.unsqueeze(2);
  auto sigma = torch::sqrt(centered.pow(2).sum(2) / static_cast<double>(flat.size(2) - 1));
  return {mu, sigma};
}

torch::Tensor disentanglement_loss(const torch::Tensor& z0_pred, const torch::Tensor& z0_reg,
                                   int channel_dim) {
  if (z0_pred.sizes() != z0_reg.sizes()) throw InvalidArgument("L_dis inputs differ in shape");
  auto [mu_p, sd_p] = channel_statistics(z0_pred, channel_dim);
  auto [mu_r, sd_r] = channel_statistics(z0_reg, channel_dim);
  auto per_sample = (sd_p - sd_r).norm(2, 1) + (mu_p - mu_r).norm(2, 1);
  return per_sample.mean().to(z0_pred.scalar_type());
}

torch::Tensor denoise_loss(const torch::Tensor& eps_hat, const torch::Tensor& eps) {
  if (eps_hat.sizes() != eps.sizes()) throw InvalidArgument("L_denoise inputs differ in shape");
  return torch::mse_loss(eps_hat, eps);
}

}  // namespace lumiforge
