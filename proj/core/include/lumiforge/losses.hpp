// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <torch/torch.h>

namespace lumiforge {

/// Per sample and channel, mean and unbiased standard deviation over all
/// remaining (space-time) positions. x: (B, F, C, h, w) or (B, C, ...)
/// with channel_dim naming C. Returns {mu, sigma}, each (B, C).
std::pair<torch::Tensor, torch::Tensor> channel_statistics(const torch::Tensor& x, int channel_dim = 2);

/// ||sigma_pred - sigma_reg||_2 + ||mu_pred - mu_reg||_2 over channels,
/// averaged over the batch.
torch::Tensor disentanglement_loss(const torch::Tensor& z0_pred, const torch::Tensor& z0_reg,
                                   int channel_dim = 2);

/// Mean squared error over all elements.
torch::Tensor denoise_loss(const torch::Tensor& eps_hat, const torch::Tensor& eps);

}  // namespace lumiforge
