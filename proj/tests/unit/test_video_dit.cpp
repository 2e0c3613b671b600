// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "gradcheck.hpp"
#include "lumiforge/checkpoint.hpp"
#include "lumiforge/error.hpp"
#include "lumiforge/light_encoder.hpp"
#include "lumiforge/video_dit.hpp"
#include "test_support.hpp"

namespace lumiforge {
namespace {

DiTConfig micro_config() {
  DiTConfig c;
  c.n_layers = 1;
  c.d_model = 8;
  c.n_heads = 2;
  c.patch = 1;
  c.mlp_ratio = 2;
  c.latent_channels = 2;
  c.text_dim = 6;
  c.n_text_tokens = 2;
  return c;
}

struct Inputs {
  torch::Tensor z, t, text;
};

Inputs micro_inputs(const DiTConfig& c, int64_t frames, int64_t size, std::uint64_t seed,
                    torch::Dtype dtype = torch::kFloat32) {
  auto gen = at::make_generator<at::CPUGeneratorImpl>(seed);
  return {torch::randn({2, frames, c.latent_channels, size, size}, gen, torch::kFloat32).to(dtype),
          torch::tensor({3, 870}, torch::kLong),
          torch::randn({2, c.text_dim}, gen, torch::kFloat32).to(dtype)};
}

TEST(DiTConfig, Validation) {
  DiTConfig c;
  EXPECT_NO_THROW(c.validate());
  c.n_heads = 3;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = DiTConfig{};
  c.n_layers = 0;
  EXPECT_THROW(c.validate(), InvalidArgument);
  const DiTConfig d = DiTConfig::from_json(micro_config().to_json());
  EXPECT_EQ(d.d_model, 8);
  EXPECT_EQ(d.patch, 1);
  EXPECT_EQ(d.schedule.t_train, 1000);
}

TEST(VideoDiT, OutputShapeMatchesInput) {
  DiTConfig c = micro_config();
  c.patch = 2;
  VideoDiT dit = make_dit(c, 0);
  const Inputs in = micro_inputs(c, 3, 4, 1);
  EXPECT_EQ(dit->forward(in.z, in.t, in.text).sizes(), in.z.sizes());
  EXPECT_THROW(dit->forward(in.z.narrow(4, 0, 3), in.t, in.text), InvalidArgument);
  EXPECT_THROW(dit->forward(in.z, in.t.narrow(0, 0, 1), in.text), InvalidArgument);
  EXPECT_THROW(dit->forward(in.z, in.t, in.text.narrow(1, 0, 2)), InvalidArgument);
}

TEST(VideoDiT, DeterministicForFixedSeed) {
  const DiTConfig c = micro_config();
  VideoDiT a = make_dit(c, 4);
  VideoDiT b = make_dit(c, 4);
  testing::perturb_parameters(*a, 1, 0.1);
  testing::perturb_parameters(*b, 1, 0.1);
  const Inputs in = micro_inputs(c, 2, 3, 2);
  const auto ya = a->forward(in.z, in.t, in.text);
  EXPECT_TRUE(torch::equal(ya, b->forward(in.z, in.t, in.text)));
  EXPECT_TRUE(torch::equal(ya, a->forward(in.z, in.t, in.text)));
  EXPECT_TRUE(torch::isfinite(ya).all().item<bool>());
}

TEST(VideoDiT, NoLightEqualsScaleZeroAtIdentityMerges) {
  DiTConfig c = micro_config();
  c.n_layers = 3;
  VideoDiT dit = make_dit(c, 5);
  testing::perturb_parameters(*dit, 2, 0.1);
  LightEncoder light = make_light_encoder(LightEncoderConfig::matching(c), 6);
  const Inputs in = micro_inputs(c, 2, 3, 3);
  const auto canvas = torch::randn({1, 2, c.latent_channels, 3, 3});
  const auto plain = dit->forward(in.z, in.t, in.text);
  for (double scale : {0.0, 0.5}) {
    // Fresh encoders emit zero conditions, so any scale is a no-op at init.
    LightInjector inj(*light, light->encode(canvas), scale);
    EXPECT_TRUE(torch::equal(plain, dit->forward(in.z, in.t, in.text, &inj)));
  }
  // Trained-looking encoders still reduce to the plain backbone at scale 0
  // while the merges are identity.
  {
    torch::NoGradGuard g;
    for (auto& item : light->named_parameters())
      if (item.key().find("out_proj") != std::string::npos) item.value().normal_(0, 0.5);
  }
  LightInjector inj0(*light, light->encode(canvas), 0.0);
  EXPECT_TRUE(torch::equal(plain, dit->forward(in.z, in.t, in.text, &inj0)));
  LightInjector inj5(*light, light->encode(canvas), 0.5);
  EXPECT_FALSE(torch::equal(plain, dit->forward(in.z, in.t, in.text, &inj5)));
}

TEST(VideoDiT, LayerCountMismatchRejected) {
  DiTConfig c = micro_config();
  c.n_layers = 2;
  VideoDiT dit = make_dit(c, 0);
  DiTConfig other = c;
  other.n_layers = 3;
  LightEncoder light = make_light_encoder(LightEncoderConfig::matching(other), 0);
  const Inputs in = micro_inputs(c, 2, 2, 0);
  LightInjector inj(*light, light->encode(torch::zeros({1, 2, c.latent_channels, 2, 2})), 0.5);
  EXPECT_THROW(dit->forward(in.z, in.t, in.text, &inj), InvalidArgument);
}

// Swapping two spatial tokens of the input swaps them in the output when no
// positional encoding breaks the symmetry.
TEST(VideoDiTProperty, TokenPermutationEquivariantWithoutPositions) {
  DiTConfig c = micro_config();
  c.positional_encoding = false;
  c.n_layers = 2;
  VideoDiT dit = make_dit(c, 7);
  testing::perturb_parameters(*dit, 3, 0.2);
  Rng rng(8);
  for (int n = 0; n < 20; ++n) {
    const Inputs in = micro_inputs(c, 2, 3, 100 + n);
    const int64_t f = static_cast<int64_t>(rng.below(2));
    const int64_t y0 = rng.below(3), x0 = rng.below(3), y1 = rng.below(3), x1 = rng.below(3);
    auto swap = [&](torch::Tensor v) {
      v = v.clone();
      auto a = v.index({torch::indexing::Slice(), f, torch::indexing::Slice(), y0, x0}).clone();
      auto b = v.index({torch::indexing::Slice(), f, torch::indexing::Slice(), y1, x1}).clone();
      v.index_put_({torch::indexing::Slice(), f, torch::indexing::Slice(), y0, x0}, b);
      v.index_put_({torch::indexing::Slice(), f, torch::indexing::Slice(), y1, x1}, a);
      return v;
    };
    const auto out = dit->forward(swap(in.z), in.t, in.text);
    const auto ref = swap(dit->forward(in.z, in.t, in.text));
    ASSERT_TRUE(torch::allclose(out, ref, 1e-5, 1e-6)) << "case " << n;
  }
}

TEST(VideoDiT, NullTextReplacesDroppedRows) {
  VideoDiT dit = make_dit(micro_config(), 0);
  const auto text = torch::ones({3, 6});
  const auto out = dit->text_or_null(text, torch::tensor({false, true, false}));
  EXPECT_TRUE(torch::equal(out[0], text[0]));
  EXPECT_TRUE(torch::equal(out[1], dit->null_text()));
  EXPECT_EQ(dit->null_batch(4).sizes(), (std::vector<int64_t>{4, 6}));
}

TEST(VideoDiT, GradientsMatchFiniteDifferences) {
  const DiTConfig c = micro_config();
  VideoDiT m32 = make_dit(c, 11);
  testing::perturb_parameters(*m32, 12, 0.3);
  VideoDiT m64 = make_dit(c, 11);
  m64->to(torch::kFloat64);
  load_module_state(*m64, module_state(*m32), "memory");
  const Inputs in32 = micro_inputs(c, 2, 2, 13);
  const Inputs in64{in32.z.to(torch::kFloat64), in32.t, in32.text.to(torch::kFloat64)};
  const auto report = testing::check_gradients(
      *m32, [&] { return m32->forward(in32.z, in32.t, in32.text).pow(2).sum(); },
      *m64, [&] { return m64->forward(in64.z, in64.t, in64.text).pow(2).sum(); });
  EXPECT_GT(report.elements, 100);
  EXPECT_LE(report.worst_relative_error, 1e-3) << report.worst_tensor;
}

TEST(VideoDiT, CheckpointRoundTrip) {
  testing::TempDir dir("dit");
  VideoDiT dit = make_dit(micro_config(), 1);
  testing::perturb_parameters(*dit, 2, 0.1);
  save_dit(dit, dir / "d.lfck", {{"steps", 3}});
  VideoDiT back = load_dit(dir / "d.lfck");
  const Inputs in = micro_inputs(micro_config(), 2, 2, 4);
  EXPECT_TRUE(torch::equal(dit->forward(in.z, in.t, in.text), back->forward(in.z, in.t, in.text)));
  EXPECT_EQ(read_checkpoint_header(dir / "d.lfck").at("meta").at("steps"), 3);
}

}  // namespace
}  // namespace lumiforge
