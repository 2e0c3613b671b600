// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "lumiforge/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>

#include "lumiforge/error.hpp"
#include "lumiforge/lighting_repr.hpp"
#include "lumiforge/rng.hpp"
#include "lumiforge/scene_renderer.hpp"
#include "lumiforge/tensor_convert.hpp"
#include "lumiforge/trainer.hpp"

namespace lumiforge {

std::vector<EvalPair> heldout_pairs(const DatasetManifest& manifest, int n, int n_frames,
                                    std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("need at least one evaluation pair");
  if (manifest.samples.empty()) throw InvalidArgument("dataset has no samples");
  std::vector<int> subjects;
  for (const auto& s : manifest.samples) {
    if (std::find(subjects.begin(), subjects.end(), s.subject_id) == subjects.end()) {
      subjects.push_back(s.subject_id);
    }
  }
  const LightGrid& grid = manifest.grid;
  const int N = grid.n_per_axis();
  // Keep lights in front of the face: the middle band of i and k, a depth
  // slab between the canvas and the camera.
  const int lo = N / 8;
  const int hi = N - 1 - N / 8;
  const int j_lo = std::min(N - 1, N / 2 + N / 4);
  const int j_hi = std::min(N - 1, N / 2 + (7 * N) / 16);
  Rng rng(mix_seed(seed, 0x4E1D));
  auto draw = [&](int a, int b) { return a + static_cast<int>(rng.below(static_cast<std::uint64_t>(b - a + 1))); };

  std::vector<EvalPair> pairs;
  for (int p = 0; p < n; ++p) {
    EvalPair pair;
    pair.subject_id = subjects[rng.below(subjects.size())];
    GridIndex a{draw(lo, hi), draw(j_lo, j_hi), draw(lo, hi)};
    GridIndex b{draw(lo, hi), a.j, draw(lo, hi)};
    while (b == a) b.i = draw(lo, hi);
    pair.trajectory = as_multi(linear_trajectory(grid, a, b, n_frames));
    const SampleRecord* base = nullptr;
    for (const auto& s : manifest.samples) {
      if (s.subject_id == pair.subject_id) {
        base = &s;
        break;
      }
    }
    pair.caption = augment_caption(base->caption, 1, mix_seed(seed, 0xE7A1 + static_cast<std::uint64_t>(p)))
                       .front()
                       .text;
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

PairReference render_reference(const EvalPair& pair, int resolution, double fps) {
  PairReference ref;
  const SubjectScene scene = build_subject(pair.subject_id, resolution, resolution);
  ref.frames = render_video(scene, pair.trajectory, fps).frames;
  ref.canvases = images_of(render_canvas_sequence(pair.trajectory, default_canvas_geometry(resolution, resolution)));
  return ref;
}

FrameEmbedder codec_frame_embedder(const LatentCodec& codec) {
  FrameEmbedder e;
  e.name = "codec_text_head";
  e.dim = codec->config().text_dim;
  e.embed = [codec](const Image& img) {
    torch::NoGradGuard guard;
    auto nchw = replicate_rgb(images_to_tensor({img})).permute({0, 3, 1, 2}).contiguous();
    auto v = codec->embed_frames(nchw).squeeze(0).contiguous();
    return std::vector<float>(v.data_ptr<float>(), v.data_ptr<float>() + v.numel());
  };
  return e;
}

PairResult sample_and_evaluate(PipelineModels& models, const EvalPair& pair,
                               const PairReference& reference, const SampleConfig& config) {
  const int text_dim = models.diffusion.backbone->config().text_dim;
  auto canvases = images_to_tensor(reference.canvases);
  auto video = sample_video(models.diffusion, models.codec, text_tensor(pair.caption, text_dim),
                            canvases, config);
  PairResult result;
  result.video = tensor_to_images(video);
  EvaluationInputs inputs{result.video, reference.canvases, reference.frames, pair.caption};
  result.report = evaluate(inputs, random_projection_embedder(),
                           std::make_pair(codec_frame_embedder(models.codec), hashed_text_embedder(text_dim)));
  return result;
}

SweepRow evaluate_pairs(PipelineModels& models, const std::vector<EvalPair>& pairs,
                        const SampleConfig& config, const std::string& label) {
  if (pairs.empty()) throw InvalidArgument("no evaluation pairs");
  SweepRow row;
  row.label = label;
  row.light_scale = config.light_scale;
  for (const auto& pair : pairs) {
    const PairReference ref = render_reference(pair, config.resolution);
    const MetricsReport r = sample_and_evaluate(models, pair, ref, config).report;
    row.consistency_embed += r.consistency_embed;
    row.consistency_perceptual += r.consistency_perceptual;
    row.direction_rmse += r.direction_rmse;
    row.brightness_consistency += r.brightness_consistency;
    row.text_similarity += r.text_similarity.value_or(0.0);
  }
  const double n = static_cast<double>(pairs.size());
  row.consistency_embed /= n;
  row.consistency_perceptual /= n;
  row.direction_rmse /= n;
  row.brightness_consistency /= n;
  row.text_similarity /= n;
  return row;
}

SweepTable light_scale_sweep(PipelineModels& models, const std::vector<EvalPair>& pairs,
                             const std::vector<double>& scales, const SampleConfig& base) {
  if (scales.empty()) throw InvalidArgument("sweep list is empty");
  SweepTable table;
  for (double s : scales) {
    SampleConfig cfg = base;
    cfg.light_scale = s;
    char label[32];
    std::snprintf(label, sizeof(label), "scale=%.1f", s);
    table.rows.push_back(evaluate_pairs(models, pairs, cfg, label));
  }
  return table;
}

nlohmann::json SweepTable::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& r : rows) {
    rows_json.push_back({{"label", r.label},
                         {"light_scale", r.light_scale},
                         {"consistency_embed", r.consistency_embed},
                         {"consistency_perceptual", r.consistency_perceptual},
                         {"direction_rmse", r.direction_rmse},
                         {"brightness_consistency", r.brightness_consistency},
                         {"text_similarity", r.text_similarity}});
  }
  return {{"rows", rows_json}};
}

std::string SweepTable::to_text() const {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-14s | %-19s | %-19s | %-8s\n", "", "Consistency", "Accuracy", "Quality");
  out << line;
  std::snprintf(line, sizeof(line), "%-14s | %9s %9s | %9s %9s | %8s\n", "setting", "embed", "percept",
                "dir_rmse", "bright", "text");
  out << line;
  out << std::string(80, '-') << "\n";
  for (const auto& r : rows) {
    std::snprintf(line, sizeof(line), "%-14s | %9.4f %9.4f | %9.4f %9.4f | %8.4f\n", r.label.c_str(),
                  r.consistency_embed, r.consistency_perceptual, r.direction_rmse,
                  r.brightness_consistency, r.text_similarity);
    out << line;
  }
  return out.str();
}

double border_diversity(const std::vector<std::vector<Image>>& videos) {
  if (videos.size() < 2) throw InvalidArgument("diversity needs at least two videos");
  const auto& first = videos.front();
  for (const auto& v : videos) {
    if (v.size() != first.size() || v.empty()) throw InvalidArgument("videos differ in length");
    for (std::size_t t = 0; t < v.size(); ++t) {
      if (!v[t].same_shape(first[t])) throw InvalidArgument("videos differ in frame shape");
    }
  }
  const int G = kBrightnessGrid;
  double total = 0.0;
  std::size_t terms = 0;
  for (std::size_t t = 0; t < first.size(); ++t) {
    const Image& ref = first[t];
    for (int gy = 0; gy < G; ++gy) {
      for (int gx = 0; gx < G; ++gx) {
        if (gy != 0 && gy != G - 1 && gx != 0 && gx != G - 1) continue;
        const int x0 = gx * ref.width() / G, x1 = (gx + 1) * ref.width() / G;
        const int y0 = gy * ref.height() / G, y1 = (gy + 1) * ref.height() / G;
        for (int c = 0; c < ref.channels(); ++c) {
          std::vector<double> means;
          for (const auto& v : videos) {
            double acc = 0.0;
            for (int y = y0; y < y1; ++y)
              for (int x = x0; x < x1; ++x) acc += v[t].at(x, y, c);
            means.push_back(acc / ((x1 - x0) * (y1 - y0)));
          }
          const double mu = std::accumulate(means.begin(), means.end(), 0.0) / means.size();
          double var = 0.0;
          for (double m : means) var += (m - mu) * (m - mu);
          total += var / (means.size() - 1);
          ++terms;
        }
      }
    }
  }
  return total / static_cast<double>(terms);
}

namespace {

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("spearman needs two equal series");
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

Image film_strip(const std::vector<Image>& frames) {
  if (frames.empty()) throw InvalidArgument("no frames for the strip");
  const Image& f0 = frames.front();
  Image strip(f0.width() * static_cast<int>(frames.size()), f0.height(), f0.channels());
  for (std::size_t n = 0; n < frames.size(); ++n) {
    if (!frames[n].same_shape(f0)) throw InvalidArgument("strip frames differ in shape");
    const int ox = static_cast<int>(n) * f0.width();
    for (int y = 0; y < f0.height(); ++y)
      for (int x = 0; x < f0.width(); ++x)
        for (int c = 0; c < f0.channels(); ++c) strip.at(ox + x, y, c) = frames[n].at(x, y, c);
  }
  return strip;
}

}  // namespace lumiforge
