// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "lumiforge/light_grid.hpp"
#include "lumiforge/lighting_repr.hpp"
#include "lumiforge/scene_renderer.hpp"

namespace lumiforge {
namespace {

void BM_ShadeFrame(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const SubjectScene scene = build_subject(3, side, side);
  const LightGrid grid = default_grid();
  const std::vector<SceneLight> lights{{grid.world_position({8, 28, 20})}};
  for (auto _ : state) benchmark::DoNotOptimize(shade_frame(scene, lights));
  state.SetItemsProcessed(state.iterations() * side * side);
}
BENCHMARK(BM_ShadeFrame)->Arg(64)->Arg(128)->Arg(256);

void BM_RenderCanvas(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const CanvasGeometry geometry = default_canvas_geometry(side, side);
  const Vec3 light = default_grid().world_position({24, 28, 12});
  for (auto _ : state) benchmark::DoNotOptimize(render_canvas(light, 1.0, geometry));
  state.SetItemsProcessed(state.iterations() * side * side);
}
BENCHMARK(BM_RenderCanvas)->Arg(64)->Arg(256);

void BM_RenderVideo(benchmark::State& state) {
  const SubjectScene scene = build_subject(1);
  const auto trajectory = linear_trajectory(default_grid(), {0, 28, 16}, {32, 28, 16}, 16);
  for (auto _ : state) benchmark::DoNotOptimize(render_video(scene, trajectory, 8.0));
}
BENCHMARK(BM_RenderVideo)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace lumiforge

BENCHMARK_MAIN();
