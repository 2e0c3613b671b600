// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "lumiforge/eval_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "lumiforge/rng.hpp"
#include "lumiforge/text_embedding.hpp"

namespace lumiforge {
namespace {

void require_pairs(const std::vector<Image>& video, const char* what) {
  if (video.size() < 2) throw InvalidArgument(std::string(what) + " needs at least two frames");
}

void require_same_length(std::size_t a, std::size_t b) {
  if (a != b) {
    throw InvalidArgument("video has " + std::to_string(a) + " frames but reference has " +
                          std::to_string(b));
  }
}

// Averages the pixels falling in each of cols x rows bins.
std::vector<double> area_bins(const Image& img, int channel, int cols, int rows) {
  std::vector<double> sum(static_cast<std::size_t>(cols) * rows, 0.0);
  std::vector<int> count(sum.size(), 0);
  for (int y = 0; y < img.height(); ++y) {
    const int by = y * rows / img.height();
    for (int x = 0; x < img.width(); ++x) {
      const int bx = x * cols / img.width();
      const auto b = static_cast<std::size_t>(by) * cols + bx;
      sum[b] += img.at(x, y, channel);
      ++count[b];
    }
  }
  for (std::size_t b = 0; b < sum.size(); ++b) sum[b] = count[b] ? sum[b] / count[b] : 0.0;
  return sum;
}

// 2x2 box downsample of a single-channel map (odd trailing row/col dropped).
std::vector<double> downsample(const std::vector<double>& src, int w, int h, int& ow, int& oh) {
  ow = std::max(1, w / 2);
  oh = std::max(1, h / 2);
  std::vector<double> out(static_cast<std::size_t>(ow) * oh, 0.0);
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      int n = 0;
      for (int dy = 0; dy < 2; ++dy)
        for (int dx = 0; dx < 2; ++dx) {
          const int sx = 2 * x + dx;
          const int sy = 2 * y + dy;
          if (sx < w && sy < h) {
            acc += src[static_cast<std::size_t>(sy) * w + sx];
            ++n;
          }
        }
      out[static_cast<std::size_t>(y) * ow + x] = acc / n;
    }
  }
  return out;
}

double scale_distance(const std::vector<double>& a, const std::vector<double>& b, int w, int h) {
  double acc = 0.0;
  std::size_t n = 0;
  auto at = [w](const std::vector<double>& m, int x, int y) {
    return m[static_cast<std::size_t>(y) * w + x];
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double dl = at(a, x, y) - at(b, x, y);
      acc += dl * dl;
      ++n;
      if (x + 1 < w) {
        const double gx = (at(a, x + 1, y) - at(a, x, y)) - (at(b, x + 1, y) - at(b, x, y));
        acc += gx * gx;
        ++n;
      }
      if (y + 1 < h) {
        const double gy = (at(a, x, y + 1) - at(a, x, y)) - (at(b, x, y + 1) - at(b, x, y));
        acc += gy * gy;
        ++n;
      }
    }
  }
  return std::sqrt(acc / static_cast<double>(n));
}

std::vector<double> luma_vector(const Image& img) {
  const Image l = luminance(img);
  return {l.data().begin(), l.data().end()};
}

}  // namespace

FrameEmbedder random_projection_embedder(int dim, std::uint64_t seed) {
  constexpr int kBins = 16;
  constexpr int kInputs = kBins * kBins * 3;
  auto weights = std::make_shared<std::vector<double>>(static_cast<std::size_t>(dim) * kInputs);
  std::mt19937_64 engine(mix_seed(seed, 0xE3BED));
  // Box-Muller over the raw engine keeps the projection platform-stable.
  for (std::size_t n = 0; n < weights->size(); n += 2) {
    const double u1 = (static_cast<double>(engine() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    (*weights)[n] = r * std::cos(2.0 * M_PI * u2);
    if (n + 1 < weights->size()) (*weights)[n + 1] = r * std::sin(2.0 * M_PI * u2);
  }
  FrameEmbedder embedder;
  embedder.name = "random_projection";
  embedder.dim = dim;
  embedder.embed = [weights, dim](const Image& img) {
    std::vector<double> features;
    features.reserve(kInputs);
    for (int c = 0; c < 3; ++c) {
      const int channel = img.channels() >= 3 ? c : 0;
      for (double v : area_bins(img, channel, kBins, kBins)) features.push_back(v - 0.5);
    }
    std::vector<float> out(static_cast<std::size_t>(dim));
    double norm = 0.0;
    for (int d = 0; d < dim; ++d) {
      const double* row = weights->data() + static_cast<std::size_t>(d) * kInputs;
      double acc = 0.0;
      for (int n = 0; n < kInputs; ++n) acc += row[n] * features[n];
      out[d] = static_cast<float>(acc);
      norm += acc * acc;
    }
    norm = std::sqrt(norm);
    if (norm > 0.0)
      for (float& v : out) v = static_cast<float>(v / norm);
    return out;
  };
  return embedder;
}

TextEmbedder hashed_text_embedder(int dim) {
  return {"hashed_tokens", dim, [dim](const std::string& s) { return embed_text(s, dim); }};
}

double cosine_similarity(const std::vector<float>& a, const std::vector<float>& b) {
  if (a.size() != b.size()) {
    throw InvalidArgument("embedding dimension mismatch: " + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()));
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    dot += static_cast<double>(a[n]) * b[n];
    na += static_cast<double>(a[n]) * a[n];
    nb += static_cast<double>(b[n]) * b[n];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / std::sqrt(na * nb);
}

double frame_embedding_consistency(const std::vector<Image>& video, const FrameEmbedder& embedder) {
  require_pairs(video, "frame embedding consistency");
  std::vector<float> prev = embedder.embed(video.front());
  double acc = 0.0;
  for (std::size_t t = 1; t < video.size(); ++t) {
    std::vector<float> cur = embedder.embed(video[t]);
    acc += cosine_similarity(prev, cur);
    prev = std::move(cur);
  }
  return acc / static_cast<double>(video.size() - 1);
}

double perceptual_distance(const Image& a, const Image& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw InvalidArgument("perceptual distance needs equally sized frames");
  }
  std::vector<double> la = luma_vector(a);
  std::vector<double> lb = luma_vector(b);
  int w = a.width();
  int h = a.height();
  double total = 0.0;
  for (int scale = 0; scale < 3; ++scale) {
    total += scale_distance(la, lb, w, h);
    if (scale < 2) {
      int ow = 0, oh = 0;
      la = downsample(la, w, h, ow, oh);
      lb = downsample(lb, w, h, ow, oh);
      w = ow;
      h = oh;
    }
  }
  return total;
}

double perceptual_consistency(const std::vector<Image>& video) {
  require_pairs(video, "perceptual consistency");
  double acc = 0.0;
  for (std::size_t t = 1; t < video.size(); ++t) acc += perceptual_distance(video[t - 1], video[t]);
  return acc / static_cast<double>(video.size() - 1);
}

std::optional<Eigen::Vector2d> bright_centroid(const Image& frame) {
  const Image lum = luminance(frame);
  std::vector<float> values(lum.data().begin(), lum.data().end());
  const float peak = *std::max_element(values.begin(), values.end());
  if (!(peak > 1e-6f)) return std::nullopt;

  std::vector<float> sorted = values;
  const auto q = static_cast<std::ptrdiff_t>(std::floor(0.9 * static_cast<double>(sorted.size() - 1)));
  std::nth_element(sorted.begin(), sorted.begin() + q, sorted.end());
  const float threshold = std::max(sorted[static_cast<std::size_t>(q)], 1e-6f);

  double wsum = 0.0, cx = 0.0, cy = 0.0;
  for (int y = 0; y < lum.height(); ++y) {
    for (int x = 0; x < lum.width(); ++x) {
      const double v = lum.at(x, y);
      if (v < threshold) continue;
      wsum += v;
      cx += v * x;
      cy += v * y;
    }
  }
  const double half_w = 0.5 * lum.width();
  const double half_h = 0.5 * lum.height();
  return Eigen::Vector2d((cx / wsum - 0.5 * (lum.width() - 1)) / half_w,
                         (cy / wsum - 0.5 * (lum.height() - 1)) / half_h);
}

DirectionEstimate estimate_direction(const Image& frame) {
  const auto offset = bright_centroid(frame);
  if (!offset) return {};
  return {*offset / std::max(offset->norm(), kDirectionDeadZone), true};
}

DirectionReport direction_report(const std::vector<Image>& video,
                                 const std::vector<Image>& reference) {
  require_same_length(video.size(), reference.size());
  DirectionReport report;
  double acc = 0.0;
  int used = 0;
  for (std::size_t t = 0; t < video.size(); ++t) {
    const DirectionEstimate a = estimate_direction(video[t]);
    const DirectionEstimate b = estimate_direction(reference[t]);
    if (!a.valid || !b.valid) {
      report.per_frame_error.push_back(std::numeric_limits<double>::quiet_NaN());
      ++report.skipped;
      continue;
    }
    const double e = (a.direction - b.direction).norm();
    report.per_frame_error.push_back(e);
    acc += e * e;
    ++used;
  }
  report.rmse = used ? std::sqrt(acc / used) : std::numeric_limits<double>::quiet_NaN();
  return report;
}

double direction_rmse(const std::vector<Image>& video, const std::vector<Image>& reference) {
  return direction_report(video, reference).rmse;
}

double direction_rmse(const FrameSequence& video, const CanvasSequence& reference) {
  return direction_rmse(video.frames, images_of(reference));
}

std::vector<double> brightness_distribution(const Image& frame) {
  const Image lum = luminance(frame);
  std::vector<double> patches = area_bins(lum, 0, kBrightnessGrid, kBrightnessGrid);
  const double total = std::accumulate(patches.begin(), patches.end(), 0.0);
  if (!(total > 0.0)) {
    std::fill(patches.begin(), patches.end(), 1.0 / static_cast<double>(patches.size()));
    return patches;
  }
  for (double& p : patches) p /= total;
  return patches;
}

double brightness_consistency(const std::vector<Image>& video, const std::vector<Image>& reference,
                              std::vector<double>* per_frame) {
  require_same_length(video.size(), reference.size());
  if (video.empty()) throw InvalidArgument("brightness consistency needs at least one frame");
  double acc = 0.0;
  for (std::size_t t = 0; t < video.size(); ++t) {
    const auto p = brightness_distribution(video[t]);
    const auto q = brightness_distribution(reference[t]);
    double score = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) score += std::min(p[n], q[n]);
    if (per_frame) per_frame->push_back(score);
    acc += score;
  }
  return acc / static_cast<double>(video.size());
}

double text_video_similarity(const std::vector<Image>& video, const std::string& caption,
                             const FrameEmbedder& image_embedder,
                             const TextEmbedder& text_embedder) {
  if (image_embedder.dim != text_embedder.dim) {
    throw InvalidArgument("image and text embedders do not share a space (dims " +
                          std::to_string(image_embedder.dim) + " vs " +
                          std::to_string(text_embedder.dim) + ")");
  }
  if (video.empty()) throw InvalidArgument("text-video similarity needs at least one frame");
  const std::vector<float> text = text_embedder.embed(caption);
  double acc = 0.0;
  for (const auto& frame : video) acc += cosine_similarity(image_embedder.embed(frame), text);
  return acc / static_cast<double>(video.size());
}

nlohmann::json MetricsReport::to_json() const {
  auto finite_or_null = [](double v) -> nlohmann::json {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
  };
  nlohmann::json doc;
  doc["consistency_embed"] = consistency_embed;
  doc["consistency_perceptual"] = consistency_perceptual;
  doc["direction_rmse"] = finite_or_null(direction_rmse);
  doc["brightness_consistency"] = brightness_consistency;
  doc["text_similarity"] = text_similarity ? nlohmann::json(*text_similarity) : nlohmann::json(nullptr);
  nlohmann::json frames = nlohmann::json::array();
  for (std::size_t t = 0; t < per_frame_brightness.size(); ++t) {
    frames.push_back({{"frame", t},
                      {"direction_error", finite_or_null(per_frame_direction_error.at(t))},
                      {"brightness", per_frame_brightness[t]}});
  }
  doc["per_frame_detail"] = std::move(frames);
  return doc;
}

std::string MetricsReport::per_frame_csv() const {
  std::ostringstream os;
  os.precision(9);
  os << "frame,direction_error,brightness\n";
  for (std::size_t t = 0; t < per_frame_brightness.size(); ++t) {
    os << t << ",";
    if (std::isfinite(per_frame_direction_error.at(t))) os << per_frame_direction_error[t];
    os << "," << per_frame_brightness[t] << "\n";
  }
  return os.str();
}

MetricsReport evaluate(const EvaluationInputs& inputs, const FrameEmbedder& image_embedder,
                       const std::optional<std::pair<FrameEmbedder, TextEmbedder>>& joint) {
  MetricsReport report;
  report.consistency_embed = frame_embedding_consistency(inputs.video, image_embedder);
  report.consistency_perceptual = perceptual_consistency(inputs.video);
  const DirectionReport dir = direction_report(inputs.video, inputs.direction_reference);
  report.direction_rmse = dir.rmse;
  report.per_frame_direction_error = dir.per_frame_error;
  report.brightness_consistency = brightness_consistency(
      inputs.video, inputs.brightness_reference, &report.per_frame_brightness);
  if (inputs.caption && joint) {
    report.text_similarity =
        text_video_similarity(inputs.video, *inputs.caption, joint->first, joint->second);
  }
  return report;
}

std::vector<Image> images_of(const CanvasSequence& seq) {
  std::vector<Image> out;
  out.reserve(seq.size());
  for (const auto& c : seq.canvases) out.push_back(c.pixels);
  return out;
}

}  // namespace lumiforge
