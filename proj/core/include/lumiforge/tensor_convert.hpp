// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include <torch/torch.h>

#include "lumiforge/image.hpp"

namespace lumiforge {

/// Stacks equally sized images into a float tensor (N, H, W, C).
torch::Tensor images_to_tensor(const std::vector<Image>& images);

/// Inverse of images_to_tensor for a (N, H, W, C) tensor.
std::vector<Image> tensor_to_images(const torch::Tensor& tensor);

/// (N, H, W, 1) -> (N, H, W, 3) by replication; 3-channel input passes through.
torch::Tensor replicate_rgb(const torch::Tensor& nhwc);

}  // namespace lumiforge
