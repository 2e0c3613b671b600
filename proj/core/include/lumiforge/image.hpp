// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "lumiforge/error.hpp"

namespace lumiforge {

/// Interleaved float image, row-major, origin at the top-left pixel.
class Image {
 public:
  Image() = default;
  Image(int width, int height, int channels, float fill = 0.0f)
      : width_(width), height_(height), channels_(channels),
        data_(static_cast<std::size_t>(width) * height * channels, fill) {
    if (width <= 0 || height <= 0 || channels <= 0) {
      throw InvalidArgument("image dimensions must be positive");
    }
  }

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }
  bool empty() const { return data_.empty(); }

  float& at(int x, int y, int c = 0) { return data_[index(x, y, c)]; }
  float at(int x, int y, int c = 0) const { return data_[index(x, y, c)]; }

  std::span<float> data() { return data_; }
  std::span<const float> data() const { return data_; }

  bool same_shape(const Image& other) const {
    return width_ == other.width_ && height_ == other.height_ && channels_ == other.channels_;
  }

  void clamp01() {
    for (float& v : data_) v = std::clamp(v, 0.0f, 1.0f);
  }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t index(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<float> data_;
};

/// Rec. 709 luma of an RGB image, or the single channel of a gray one.
inline Image luminance(const Image& img) {
  Image out(img.width(), img.height(), 1);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (img.channels() >= 3) {
        out.at(x, y) = 0.2126f * img.at(x, y, 0) + 0.7152f * img.at(x, y, 1) +
                       0.0722f * img.at(x, y, 2);
      } else {
        out.at(x, y) = img.at(x, y, 0);
      }
    }
  }
  return out;
}

inline Image mirror_horizontal(const Image& img) {
  Image out(img.width(), img.height(), img.channels());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      for (int c = 0; c < img.channels(); ++c)
        out.at(img.width() - 1 - x, y, c) = img.at(x, y, c);
  return out;
}

}  // namespace lumiforge
