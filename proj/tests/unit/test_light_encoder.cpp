// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "gradcheck.hpp"
#include "lumiforge/error.hpp"
#include "lumiforge/light_encoder.hpp"
#include "lumiforge/rng.hpp"
#include "test_support.hpp"

namespace lumiforge {
namespace {

DiTConfig backbone_config(int layers = 2, int d = 8) {
  DiTConfig c;
  c.n_layers = layers;
  c.d_model = d;
  c.n_heads = 2;
  c.patch = 1;
  c.mlp_ratio = 2;
  c.latent_channels = 2;
  c.text_dim = 6;
  return c;
}

TEST(LightEncoderConfig, MirrorsBackbone) {
  const DiTConfig b = backbone_config(3, 16);
  const auto c = LightEncoderConfig::matching(b);
  EXPECT_EQ(c.n_layers, 3);
  EXPECT_EQ(c.d_model, 16);
  EXPECT_DOUBLE_EQ(c.guidance_scale_default, 0.5);
  EXPECT_NO_THROW(c.check_pairing(b));
  EXPECT_THROW(c.check_pairing(backbone_config(2, 16)), InvalidArgument);
  EXPECT_THROW(c.check_pairing(backbone_config(3, 8)), InvalidArgument);
  const auto d = LightEncoderConfig::from_json(c.to_json());
  EXPECT_EQ(d.n_layers, 3);
}

TEST(LightEncoder, OneConditionPerLayer) {
  for (int layers : {1, 2, 4})
    for (int d : {8, 16}) {
      const DiTConfig b = backbone_config(layers, d);
      LightEncoder enc = make_light_encoder(LightEncoderConfig::matching(b), 0);
      const auto seq = enc->encode(torch::randn({1, 3, 2, 4, 4}));
      ASSERT_EQ(seq.size(), static_cast<std::size_t>(layers));
      for (const auto& c : seq.per_layer) EXPECT_EQ(c.sizes(), (std::vector<int64_t>{1, 3 * 4 * 4, d}));
    }
}

TEST(LightEncoder, ZeroInitGivesZeroConditions) {
  LightEncoder enc = make_light_encoder(LightEncoderConfig::matching(backbone_config()), 1);
  for (const auto& input : {torch::zeros({1, 2, 2, 3, 3}), torch::randn({1, 2, 2, 3, 3})}) {
    for (const auto& c : enc->encode(input).per_layer) EXPECT_EQ(c.abs().max().item<float>(), 0.0f);
  }
}

TEST(LightEncoder, RejectsWrongChannels) {
  LightEncoder enc = make_light_encoder(LightEncoderConfig::matching(backbone_config()), 1);
  EXPECT_THROW(enc->encode(torch::zeros({1, 2, 3, 3, 3})), InvalidArgument);
}

TEST(Merge, ScaleZeroAtInitIsExactIdentity) {
  LightEncoder enc = make_light_encoder(LightEncoderConfig::matching(backbone_config()), 2);
  const auto h = torch::randn({2, 5, 8});
  const auto c = torch::randn({2, 5, 8});
  EXPECT_TRUE(torch::equal(enc->merge(0, h, c, 0.0), h));
  EXPECT_TRUE(torch::equal(enc->merge(1, h, torch::zeros_like(h), 0.7), h));
  EXPECT_THROW(enc->merge(2, h, c, 0.5), InvalidArgument);
  EXPECT_THROW(enc->merge(0, h, c.narrow(1, 0, 4), 0.5), InvalidArgument);
}

TEST(MergeProperty, AffineInScale) {
  LightEncoder enc = make_light_encoder(LightEncoderConfig::matching(backbone_config()), 3);
  testing::perturb_parameters(*enc, 4, 0.3);
  Rng rng(5);
  for (int n = 0; n < 50; ++n) {
    const auto h = torch::randn({1, 6, 8});
    const auto c = torch::randn({1, 6, 8});
    const int layer = static_cast<int>(rng.below(2));
    const double s = rng.uniform(0, 0.5);
    const auto lhs = enc->merge(layer, h, c, 0.5 - s) + enc->merge(layer, h, c, 0.5 + s);
    ASSERT_TRUE(torch::allclose(lhs, 2 * enc->merge(layer, h, c, 0.5), 1e-5, 1e-5));
  }
  const auto h = torch::randn({1, 6, 8});
  const auto c = torch::randn({1, 6, 8});
  EXPECT_TRUE(torch::allclose(enc->merge(0, h, c, 0.2) + enc->merge(0, h, c, 0.8),
                              2 * enc->merge(0, h, c, 0.5), 1e-5, 1e-5));
}

// With patch 1 a horizontal flip of the latent is a token permutation, so the
// conditions of a flipped canvas are the flipped conditions.
TEST(LightEncoderProperty, MirrorEquivariantWithoutPositions) {
  DiTConfig b = backbone_config(2, 8);
  b.positional_encoding = false;
  LightEncoder enc = make_light_encoder(LightEncoderConfig::matching(b), 6);
  testing::perturb_parameters(*enc, 7, 0.3);
  for (int n = 0; n < 10; ++n) {
    const auto canvas = torch::randn({1, 2, 2, 3, 4});
    const auto flipped = canvas.flip({4});
    const auto a = enc->encode(canvas);
    const auto m = enc->encode(flipped);
    for (std::size_t l = 0; l < a.size(); ++l) {
      const auto grid = a.per_layer[l].view({1, 2, 3, 4, 8}).flip({3}).reshape({1, 24, 8});
      ASSERT_TRUE(torch::allclose(grid, m.per_layer[l], 1e-5, 1e-6));
    }
  }
}

TEST(LightInjector, BroadcastsSingleCondition) {
  LightEncoder enc = make_light_encoder(LightEncoderConfig::matching(backbone_config()), 8);
  testing::perturb_parameters(*enc, 9, 0.3);
  const auto seq = enc->encode(torch::randn({1, 2, 2, 2, 2}));
  LightInjector inj(*enc, seq, 0.5);
  const auto h = torch::randn({3, 8, 8});
  const auto out = inj.apply(1, h);
  for (int b = 0; b < 3; ++b)
    EXPECT_TRUE(torch::allclose(out[b], enc->merge(1, h[b].unsqueeze(0), seq.per_layer[1], 0.5)[0]));
  EXPECT_EQ(inj.layers(), 2);
}

TEST(LightEncoder, CheckpointRoundTrip) {
  testing::TempDir dir("light");
  LightEncoder enc = make_light_encoder(LightEncoderConfig::matching(backbone_config()), 10);
  testing::perturb_parameters(*enc, 11, 0.2);
  save_light_encoder(enc, dir / "l.lfck", nlohmann::json::object());
  LightEncoder back = load_light_encoder(dir / "l.lfck");
  const auto x = torch::randn({1, 2, 2, 2, 2});
  EXPECT_TRUE(torch::equal(enc->encode(x).per_layer[1], back->encode(x).per_layer[1]));
  EXPECT_THROW(load_light_encoder("/nonexistent.lfck"), Error);
}

}  // namespace
}  // namespace lumiforge
