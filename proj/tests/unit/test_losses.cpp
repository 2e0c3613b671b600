// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <gtest/gtest.h>

#include "lumiforge/error.hpp"
#include "lumiforge/losses.hpp"
#include "lumiforge/rng.hpp"
#include "test_support.hpp"

namespace lumiforge {
namespace {

// Random (B, F, C, h, w) shapes with at least two positions per channel.
std::vector<int64_t> random_shape(Rng& rng) {
  return {1 + static_cast<int64_t>(rng.below(3)), 1 + static_cast<int64_t>(rng.below(4)),
          1 + static_cast<int64_t>(rng.below(4)), 2 + static_cast<int64_t>(rng.below(4)),
          1 + static_cast<int64_t>(rng.below(4))};
}

// Applies an independent random permutation of space-time positions to every
// (sample, channel) slice.
torch::Tensor permute_per_channel(const torch::Tensor& x, Rng& rng) {
  auto moved = x.movedim(2, 1).contiguous();  // (B, C, F, h, w)
  auto flat = moved.view({moved.size(0), moved.size(1), -1}).clone();
  const int64_t n = flat.size(2);
  for (int64_t b = 0; b < flat.size(0); ++b)
    for (int64_t c = 0; c < flat.size(1); ++c) {
      std::vector<int64_t> perm(static_cast<std::size_t>(n));
      for (int64_t i = 0; i < n; ++i) perm[i] = i;
      for (int64_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
      flat[b][c] = flat[b][c].index_select(0, torch::tensor(perm, torch::kLong));
    }
  return flat.view(moved.sizes()).movedim(1, 2).contiguous();
}

TEST(DisentanglementLoss, IdenticalInputsGiveExactZero) {
  const auto x = torch::randn({2, 4, 3, 4, 4});
  EXPECT_EQ(disentanglement_loss(x, x).item<float>(), 0.0f);
}

TEST(DisentanglementLoss, ConstantShiftGivesNormOfShift) {
  const auto x = torch::randn({2, 4, 3, 4, 4}, torch::kFloat64);
  const auto k = torch::tensor({0.5, -1.25, 2.0}, torch::kFloat64);
  const auto y = x + k.view({1, 1, 3, 1, 1});
  EXPECT_NEAR(disentanglement_loss(y, x).item<double>(), k.norm().item<double>(), 1e-12);
}

TEST(DisentanglementLoss, RejectsDegenerateAndMismatchedInputs) {
  EXPECT_THROW(disentanglement_loss(torch::zeros({1, 1, 2, 1, 1}), torch::zeros({1, 1, 2, 1, 1})),
               InvalidArgument);
  EXPECT_THROW(disentanglement_loss(torch::zeros({1, 2, 2, 2, 2}), torch::zeros({1, 2, 2, 2, 3})),
               InvalidArgument);
}

TEST(DisentanglementLossProperty, NonNegativeAndPermutationInvariant) {
  Rng rng(99);
  torch::manual_seed(99);
  for (int c = 0; c < testing::kPropertyCases; ++c) {
    const auto shape = random_shape(rng);
    const auto a = torch::randn(shape) * rng.uniform(0.1, 3.0);
    const auto b = torch::randn(shape) + rng.uniform(-1, 1);
    const float base = disentanglement_loss(a, b).item<float>();
    ASSERT_GE(base, 0.0f);
    ASSERT_EQ(disentanglement_loss(a, a).item<float>(), 0.0f);
    ASSERT_EQ(disentanglement_loss(permute_per_channel(a, rng), a).item<float>(), 0.0f);
    ASSERT_EQ(disentanglement_loss(permute_per_channel(a, rng), b).item<float>(), base);
    ASSERT_EQ(disentanglement_loss(a, permute_per_channel(b, rng)).item<float>(), base);
  }
}

TEST(ChannelStatistics, MatchesDirectComputation) {
  const auto x = torch::randn({2, 3, 4, 2, 2}, torch::kFloat64);
  const auto [mu, sigma] = channel_statistics(x);
  const auto flat = x.movedim(2, 1).reshape({2, 4, -1});
  EXPECT_TRUE(torch::allclose(mu, flat.mean(2)));
  EXPECT_TRUE(torch::allclose(sigma, flat.std(2, /*unbiased=*/true)));
}

TEST(DenoiseLoss, Identities) {
  const auto eps = torch::randn({2, 4, 4, 4, 4});
  EXPECT_EQ(denoise_loss(eps, eps).item<float>(), 0.0f);
  EXPECT_NEAR(denoise_loss(eps + 1.0, eps).item<float>(), 1.0f, 1e-6);
  EXPECT_THROW(denoise_loss(eps, eps.view({-1})), InvalidArgument);
}

// Two independent unit Gaussians differ with variance 2.
TEST(DenoiseLoss, IndependentUnitNoiseGivesTwo) {
  auto gen = at::make_generator<at::CPUGeneratorImpl>(7);
  const int64_t n = 1 << 18;
  const auto a = torch::randn({n}, gen, torch::kFloat32);
  const auto b = torch::randn({n}, gen, torch::kFloat32);
  // Var((a-b)^2) = 8, so the mean has std sqrt(8 / n).
  EXPECT_NEAR(denoise_loss(a, b).item<float>(), 2.0, 5.0 * std::sqrt(8.0 / n));
}

}  // namespace
}  // namespace lumiforge
