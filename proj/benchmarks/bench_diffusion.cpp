// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>
#include <torch/torch.h>

#include "lumiforge/latent_codec.hpp"
#include "lumiforge/light_encoder.hpp"
#include "lumiforge/losses.hpp"
#include "lumiforge/video_dit.hpp"

namespace lumiforge {
namespace {

// Desk-scale backbone: 4 layers, d_model 128, patch 4 over 16x16 latents.
DiTConfig desk_config() {
  DiTConfig c;
  c.n_layers = 4;
  c.d_model = 128;
  c.n_heads = 4;
  c.patch = 4;
  return c;
}

void BM_DiTForward(benchmark::State& state) {
  torch::NoGradGuard guard;
  const DiTConfig c = desk_config();
  VideoDiT dit = make_dit(c, 0);
  const auto B = state.range(0);
  const auto z = torch::randn({B, 16, c.latent_channels, 16, 16});
  const auto t = torch::full({B}, 500, torch::kLong);
  const auto text = torch::randn({B, c.text_dim});
  for (auto _ : state) benchmark::DoNotOptimize(dit->forward(z, t, text));
}
BENCHMARK(BM_DiTForward)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_DiTForwardWithLight(benchmark::State& state) {
  torch::NoGradGuard guard;
  const DiTConfig c = desk_config();
  VideoDiT dit = make_dit(c, 0);
  LightEncoder light = make_light_encoder(LightEncoderConfig::matching(c), 1);
  const auto z = torch::randn({1, 16, c.latent_channels, 16, 16});
  const auto t = torch::full({1}, 500, torch::kLong);
  const auto text = torch::randn({1, c.text_dim});
  LightInjector injector(*light, light->encode(torch::randn({1, 16, c.latent_channels, 16, 16})), 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(dit->forward(z, t, text, &injector));
}
BENCHMARK(BM_DiTForwardWithLight)->Unit(benchmark::kMillisecond);

void BM_CodecEncodeDecode(benchmark::State& state) {
  torch::NoGradGuard guard;
  LatentCodec codec = make_codec(CodecConfig{}, 0);
  const auto video = torch::rand({16, 64, 64, 3});
  for (auto _ : state) benchmark::DoNotOptimize(codec->decode(codec->encode(video)));
}
BENCHMARK(BM_CodecEncodeDecode)->Unit(benchmark::kMillisecond);

void BM_DisentanglementLoss(benchmark::State& state) {
  const auto a = torch::randn({2, 16, 4, 16, 16});
  const auto b = torch::randn({2, 16, 4, 16, 16});
  for (auto _ : state) benchmark::DoNotOptimize(disentanglement_loss(a, b));
}
BENCHMARK(BM_DisentanglementLoss);

}  // namespace
}  // namespace lumiforge

BENCHMARK_MAIN();
