// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "lumiforge/error.hpp"
#include "lumiforge/rng.hpp"
#include "lumiforge/transformer_blocks.hpp"
#include "test_support.hpp"

namespace lumiforge {
namespace {

TEST(Patchify, ShapeAndTokenOrder) {
  const auto x = torch::arange(2 * 3 * 2 * 4 * 6, torch::kFloat32).view({2, 3, 2, 4, 6});
  const auto tokens = patchify(x, 2);
  EXPECT_EQ(tokens.sizes(), (std::vector<int64_t>{2, 3 * 2 * 3, 2 * 2 * 2}));
  const TokenGrid g = token_grid(x, 2);
  EXPECT_EQ(g.frames, 3);
  EXPECT_EQ(g.rows, 2);
  EXPECT_EQ(g.cols, 3);
  // Token (frame 1, row 1, col 2) holds the patch x[:, 1, :, 2:4, 4:6].
  const int64_t idx = (1 * 2 + 1) * 3 + 2;
  const auto patch = x.index({0, 1, torch::indexing::Slice(), torch::indexing::Slice(2, 4),
                              torch::indexing::Slice(4, 6)});
  EXPECT_TRUE(torch::equal(tokens[0][idx], patch.reshape({-1})));
}

TEST(PatchifyProperty, UnpatchifyInverts) {
  Rng rng(1);
  for (int c = 0; c < 50; ++c) {
    const int p = 1 << rng.below(3);
    const auto shape = std::vector<int64_t>{1 + static_cast<int64_t>(rng.below(2)),
                                            1 + static_cast<int64_t>(rng.below(3)),
                                            1 + static_cast<int64_t>(rng.below(4)),
                                            p * (1 + static_cast<int64_t>(rng.below(3))),
                                            p * (1 + static_cast<int64_t>(rng.below(3)))};
    const auto x = torch::randn(shape);
    const auto back = unpatchify(patchify(x, p), token_grid(x, p), static_cast<int>(shape[2]), p);
    ASSERT_TRUE(torch::equal(back, x));
  }
}

TEST(Patchify, RejectsIndivisible) {
  EXPECT_THROW(patchify(torch::zeros({1, 1, 1, 3, 4}), 2), InvalidArgument);
  EXPECT_THROW(patchify(torch::zeros({1, 1, 4, 4}), 2), InvalidArgument);
}

TEST(PositionalEncoding, DistinctPerToken) {
  const TokenGrid g{3, 2, 2};
  const auto pe = positional_encoding(g, 24);
  ASSERT_EQ(pe.sizes(), (std::vector<int64_t>{12, 24}));
  for (int a = 0; a < 12; ++a)
    for (int b = a + 1; b < 12; ++b) EXPECT_FALSE(torch::equal(pe[a], pe[b])) << a << " " << b;
}

TEST(TimestepEmbedding, ShapeAndDistinctSteps) {
  const auto e = timestep_embedding(torch::tensor({1, 2, 500}, torch::kLong), 17);
  EXPECT_EQ(e.sizes(), (std::vector<int64_t>{3, 17}));
  EXPECT_FALSE(torch::equal(e[0], e[1]));
  EXPECT_TRUE(torch::isfinite(e).all().item<bool>());
}

TEST(Attention, RejectsIndivisibleHeads) { EXPECT_THROW(MultiHeadAttention(10, 3), InvalidArgument); }

TEST(AttentionProperty, SelfAttentionIsPermutationEquivariant) {
  torch::manual_seed(3);
  MultiHeadAttention attn(8, 2);
  Rng rng(4);
  for (int c = 0; c < 20; ++c) {
    const int64_t n = 2 + static_cast<int64_t>(rng.below(8));
    const auto x = torch::randn({2, n, 8});
    std::vector<int64_t> perm(static_cast<std::size_t>(n));
    for (int64_t i = 0; i < n; ++i) perm[i] = i;
    for (int64_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
    const auto idx = torch::tensor(perm, torch::kLong);
    const auto y = attn->forward(x).index_select(1, idx);
    const auto y_perm = attn->forward(x.index_select(1, idx));
    ASSERT_TRUE(torch::allclose(y, y_perm, 1e-5, 1e-6));
  }
}

TEST(Modulate, ZeroModulationIsIdentity) {
  const auto x = torch::randn({2, 5, 4});
  const auto z = torch::zeros({2, 4});
  EXPECT_TRUE(torch::equal(modulate(x, z, z), x));
}

}  // namespace
}  // namespace lumiforge
