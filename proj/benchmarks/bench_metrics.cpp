// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "lumiforge/eval_metrics.hpp"
#include "lumiforge/light_grid.hpp"
#include "lumiforge/lighting_repr.hpp"
#include "lumiforge/scene_renderer.hpp"

namespace lumiforge {
namespace {

struct Fixture {
  std::vector<Image> frames;
  std::vector<Image> canvases;
};

const Fixture& fixture() {
  static const Fixture f = [] {
    const auto t = as_multi(linear_trajectory(default_grid(), {2, 28, 10}, {30, 28, 22}, 16));
    return Fixture{render_video(build_subject(0), t, 8.0).frames,
                   images_of(render_canvas_sequence(t, default_canvas_geometry()))};
  }();
  return f;
}

void BM_DirectionRmse(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(direction_rmse(f.frames, f.canvases));
}
BENCHMARK(BM_DirectionRmse);

void BM_BrightnessConsistency(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(brightness_consistency(f.frames, f.frames));
}
BENCHMARK(BM_BrightnessConsistency);

void BM_PerceptualConsistency(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(perceptual_consistency(f.frames));
}
BENCHMARK(BM_PerceptualConsistency);

void BM_EmbeddingConsistency(benchmark::State& state) {
  const auto& f = fixture();
  const FrameEmbedder e = random_projection_embedder();
  for (auto _ : state) benchmark::DoNotOptimize(frame_embedding_consistency(f.frames, e));
}
BENCHMARK(BM_EmbeddingConsistency);

}  // namespace
}  // namespace lumiforge

BENCHMARK_MAIN();
