// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <gtest/gtest.h>

#include "lumiforge/error.hpp"
#include "lumiforge/eval_metrics.hpp"
#include "lumiforge/lighting_repr.hpp"
#include "lumiforge/rng.hpp"
#include "lumiforge/trajectory_io.hpp"
#include "test_support.hpp"

namespace lumiforge {
namespace {

Image random_image(Rng& rng, int w = 32, int h = 32, int c = 3) {
  Image img(w, h, c);
  for (float& v : img.data()) v = static_cast<float>(rng.uniform());
  return img;
}

std::vector<Image> random_video(Rng& rng, int frames) {
  std::vector<Image> v;
  for (int f = 0; f < frames; ++f) v.push_back(random_image(rng));
  return v;
}

TEST(FrameEmbedding, ConstantVideoGivesOne) {
  Rng rng(1);
  const Image f = random_image(rng);
  const auto e = random_projection_embedder();
  EXPECT_NEAR(frame_embedding_consistency({f, f, f, f}, e), 1.0, 1e-6);
  EXPECT_THROW(frame_embedding_consistency({f}, e), InvalidArgument);
}

TEST(FrameEmbedding, OrthogonalEmbeddingsGiveZero) {
  int calls = 0;
  FrameEmbedder axis{"axis", 2, [&](const Image&) {
                       const bool odd = (calls++ % 2) == 1;
                       return std::vector<float>{odd ? 0.0f : 1.0f, odd ? 1.0f : 0.0f};
                     }};
  Image f(4, 4, 3);
  EXPECT_NEAR(frame_embedding_consistency({f, f, f}, axis), 0.0, 1e-12);
}

TEST(FrameEmbedding, UnitNormAndDeterministic) {
  Rng rng(2);
  const auto e = random_projection_embedder(64, 0);
  const Image f = random_image(rng);
  const auto v = e.embed(f);
  double n2 = 0;
  for (float x : v) n2 += x * x;
  EXPECT_NEAR(n2, 1.0, 1e-5);
  EXPECT_EQ(v, e.embed(f));
  EXPECT_EQ(v, random_projection_embedder(64, 0).embed(f));
}

TEST(Perceptual, IdentityPositivityAndSymmetry) {
  Rng rng(3);
  for (int c = 0; c < 30; ++c) {
    const Image a = random_image(rng);
    const Image b = random_image(rng);
    ASSERT_EQ(perceptual_distance(a, a), 0.0);
    ASSERT_DOUBLE_EQ(perceptual_distance(a, b), perceptual_distance(b, a));
    Image neg = a;
    for (float& v : neg.data()) v = 1.0f - v;
    ASSERT_GT(perceptual_distance(a, neg), 0.0);
  }
  const Image f = random_image(rng);
  EXPECT_EQ(perceptual_consistency({f, f, f}), 0.0);
  EXPECT_THROW(perceptual_consistency({f}), InvalidArgument);
}

Image horizontal_ramp(int w, int h) {
  Image img(w, h, 3);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < 3; ++c) img.at(x, y, c) = static_cast<float>(x) / (w - 1);
  return img;
}

TEST(EstimateDirection, RightEdgeGradient) {
  const DirectionEstimate d = estimate_direction(horizontal_ramp(64, 64));
  ASSERT_TRUE(d.valid);
  EXPECT_NEAR(d.direction.x(), 1.0, 1e-2);
  EXPECT_NEAR(d.direction.y(), 0.0, 1e-2);
}

TEST(EstimateDirection, CenteredPeakIsFrontal) {
  const CanvasGeometry g = default_canvas_geometry();
  const Image c = render_canvas(g.plane_point + g.plane_normal * 30.0, 1.0, g).pixels;
  const DirectionEstimate d = estimate_direction(c);
  ASSERT_TRUE(d.valid);
  EXPECT_NEAR(d.direction.norm(), 0.0, 1e-6);
}

TEST(EstimateDirection, BlackFrameIsFlagged) {
  EXPECT_FALSE(estimate_direction(Image(8, 8, 3)).valid);
  const auto r = direction_report({Image(8, 8, 3), horizontal_ramp(8, 8)}, {horizontal_ramp(8, 8), horizontal_ramp(8, 8)});
  EXPECT_EQ(r.skipped, 1);
  EXPECT_TRUE(std::isnan(r.per_frame_error[0]));
  EXPECT_NEAR(r.rmse, 0.0, 1e-12);
}

TEST(EstimateDirection, MirroredCanvasesGiveMirroredDirections) {
  const CanvasGeometry g = default_canvas_geometry();
  const LightGrid grid = default_grid();
  const auto right = estimate_direction(render_canvas(grid.world_position({32, 28, 16}), 1.0, g).pixels);
  const auto left = estimate_direction(render_canvas(grid.world_position({0, 28, 16}), 1.0, g).pixels);
  ASSERT_TRUE(right.valid && left.valid);
  EXPECT_GT(right.direction.x(), 0.5);
  EXPECT_NEAR(right.direction.x(), -left.direction.x(), 1e-6);
  EXPECT_NEAR(right.direction.y(), left.direction.y(), 1e-6);
}

TEST(DirectionRmse, SelfReferenceIsZeroAndLengthsChecked) {
  Rng rng(4);
  const auto v = random_video(rng, 5);
  EXPECT_EQ(direction_rmse(v, v), 0.0);
  EXPECT_THROW(direction_rmse(v, random_video(rng, 4)), InvalidArgument);
}

// Renderer self-consistency over the toy dataset's light paths: subject frames
// point the same way as their canvases.
TEST(DirectionRmse, GroundTruthFramesTrackCanvases) {
  const std::filesystem::path dir = std::filesystem::path(LUMIFORGE_CONFIG_DIR) / "trajectories";
  const CanvasGeometry g = default_canvas_geometry();
  for (const char* name : {"horizontal.json", "vertical.json", "diagonal.json", "arc.json"}) {
    const auto traj = load_trajectory(dir / name);
    const auto canvases = render_canvas_sequence(traj, g);
    for (int subject : {0, 1}) {
      const auto video = render_video(build_subject(subject), traj, 8.0);
      EXPECT_LT(direction_rmse(video, canvases), 0.15) << name << " subject " << subject;
    }
  }
}

TEST(Brightness, IdentityAndScaleInvariance) {
  Rng rng(5);
  const auto v = random_video(rng, 4);
  EXPECT_NEAR(brightness_consistency(v, v), 1.0, 1e-12);
  auto half = v;
  for (auto& f : half)
    for (float& x : f.data()) x *= 0.5f;
  EXPECT_NEAR(brightness_consistency(half, v), 1.0, 1e-6);
  EXPECT_THROW(brightness_consistency(v, std::vector<Image>{v[0]}), InvalidArgument);
}

TEST(Brightness, ZeroFrameIsUniform) {
  const auto d = brightness_distribution(Image(16, 16, 3));
  ASSERT_EQ(d.size(), 64u);
  for (double x : d) EXPECT_DOUBLE_EQ(x, 1.0 / 64);
}

TEST(BrightnessProperty, InUnitInterval) {
  Rng rng(6);
  for (int c = 0; c < 50; ++c) {
    const double s = brightness_consistency(random_video(rng, 2), random_video(rng, 2));
    ASSERT_GE(s, 0.0);
    ASSERT_LE(s, 1.0 + 1e-12);
  }
}

TEST(TextSimilarity, IdenticalEmbeddingsGiveOne) {
  FrameEmbedder img{"const", 3, [](const Image&) { return std::vector<float>{0.6f, 0.8f, 0.0f}; }};
  TextEmbedder txt{"const", 3, [](const std::string&) { return std::vector<float>{0.6f, 0.8f, 0.0f}; }};
  Image f(4, 4, 3);
  EXPECT_NEAR(text_video_similarity({f, f}, "anything", img, txt), 1.0, 1e-6);
  TextEmbedder wrong{"wrong", 2, [](const std::string&) { return std::vector<float>{1.0f, 0.0f}; }};
  EXPECT_THROW(text_video_similarity({f}, "x", img, wrong), InvalidArgument);
}

TEST(Evaluate, IdentityReport) {
  Rng rng(7);
  const Image f = random_image(rng);
  EvaluationInputs in{{f, f, f}, {f, f, f}, {f, f, f}, std::nullopt};
  const MetricsReport r = evaluate(in, random_projection_embedder());
  EXPECT_NEAR(r.consistency_embed, 1.0, 1e-6);
  EXPECT_EQ(r.consistency_perceptual, 0.0);
  EXPECT_EQ(r.direction_rmse, 0.0);
  EXPECT_NEAR(r.brightness_consistency, 1.0, 1e-12);
  EXPECT_FALSE(r.text_similarity.has_value());
  const auto j = r.to_json();
  EXPECT_TRUE(j.contains("direction_rmse"));
  EXPECT_NE(r.per_frame_csv().find('\n'), std::string::npos);
}

TEST(EvaluateProperty, DeterministicAndOrderSensitive) {
  Rng rng(8);
  const auto e = random_projection_embedder();
  for (int c = 0; c < 10; ++c) {
    const auto v = random_video(rng, 4);
    const auto ref = random_video(rng, 4);
    const auto a = evaluate({v, ref, ref, std::nullopt}, e);
    const auto b = evaluate({v, ref, ref, std::nullopt}, e);
    ASSERT_EQ(a.to_json(), b.to_json());
    ASSERT_GE(a.direction_rmse, 0.0);
    ASSERT_GE(a.consistency_embed, -1.0);
    ASSERT_LE(a.consistency_embed, 1.0);
  }
}

}  // namespace
}  // namespace lumiforge
