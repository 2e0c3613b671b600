// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace lumiforge {

inline constexpr int kDefaultTextDim = 64;

/// Lowercased alphanumeric tokens; everything else separates.
std::vector<std::string> tokenize(std::string_view text);

/// Hashed bag-of-tokens: each token adds +-1 to one of dim buckets, and the
/// sum is L2-normalized. The empty string (no tokens) maps to the zero vector.
std::vector<float> embed_text(std::string_view caption, int dim = kDefaultTextDim);

}  // namespace lumiforge
