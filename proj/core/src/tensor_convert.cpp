// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "lumiforge/tensor_convert.hpp"

#include <algorithm>

namespace lumiforge {

torch::Tensor images_to_tensor(const std::vector<Image>& images) {
  if (images.empty()) throw InvalidArgument("no images to stack");
  const Image& first = images.front();
  auto out = torch::empty({static_cast<long>(images.size()), first.height(), first.width(),
                           first.channels()},
                          torch::kFloat32);
  float* dst = out.data_ptr<float>();
  for (const auto& img : images) {
    if (!img.same_shape(first)) throw InvalidArgument("images differ in shape");
    dst = std::copy(img.data().begin(), img.data().end(), dst);
  }
  return out;
}

std::vector<Image> tensor_to_images(const torch::Tensor& tensor) {
  if (tensor.dim() != 4) throw InvalidArgument("expected a (N, H, W, C) tensor");
  const auto t = tensor.detach().to(torch::kFloat32).contiguous();
  const int n = static_cast<int>(t.size(0));
  const int h = static_cast<int>(t.size(1));
  const int w = static_cast<int>(t.size(2));
  const int c = static_cast<int>(t.size(3));
  std::vector<Image> images;
  images.reserve(static_cast<std::size_t>(n));
  const float* src = t.data_ptr<float>();
  const std::size_t stride = static_cast<std::size_t>(h) * w * c;
  for (int i = 0; i < n; ++i) {
    Image img(w, h, c);
    std::copy(src + i * stride, src + (i + 1) * stride, img.data().begin());
    images.push_back(std::move(img));
  }
  return images;
}

torch::Tensor replicate_rgb(const torch::Tensor& nhwc) {
  if (nhwc.size(-1) == 3) return nhwc;
  if (nhwc.size(-1) != 1) throw InvalidArgument("expected 1 or 3 channels");
  return nhwc.expand({nhwc.size(0), nhwc.size(1), nhwc.size(2), 3}).contiguous();
}

}  // namespace lumiforge
