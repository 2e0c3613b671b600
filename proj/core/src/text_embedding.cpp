// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "lumiforge/text_embedding.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>

#include "lumiforge/error.hpp"

namespace lumiforge {
namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<float> embed_text(std::string_view caption, int dim) {
  if (dim < 1) throw InvalidArgument("text embedding dimension must be positive");
  std::vector<double> acc(static_cast<std::size_t>(dim), 0.0);
  for (const auto& token : tokenize(caption)) {
    const std::uint64_t h = fnv1a(token);
    const auto bucket = static_cast<std::size_t>(h % static_cast<std::uint64_t>(dim));
    acc[bucket] += ((h >> 32) & 1U) ? 1.0 : -1.0;
  }
  double norm = 0.0;
  for (double v : acc) norm += v * v;
  norm = std::sqrt(norm);
  std::vector<float> out(acc.size(), 0.0f);
  if (norm > 0.0) {
    for (std::size_t n = 0; n < acc.size(); ++n) out[n] = static_cast<float>(acc[n] / norm);
  }
  return out;
}

}  // namespace lumiforge
