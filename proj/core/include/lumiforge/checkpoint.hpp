// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>
#include <torch/torch.h>

namespace lumiforge {

// Binary layout, little-endian:
//   "LFCKPT\0\0"            8-byte magic
//   u32 format version
//   u64 header length, then the header as UTF-8 JSON
//   float32 payloads back to back, in header order
// The header holds {"format", "kind", "config", "meta", "tensors": [{name, shape}]}.

inline constexpr std::uint32_t kCheckpointFormat = 1;

using NamedTensors = std::vector<std::pair<std::string, torch::Tensor>>;

struct Checkpoint {
  nlohmann::json header;
  NamedTensors tensors;

  const std::string kind() const { return header.at("kind").get<std::string>(); }
  const nlohmann::json& config() const { return header.at("config"); }
  const nlohmann::json& meta() const { return header.at("meta"); }
};

/// Parameters then buffers, in registration order.
NamedTensors module_state(const torch::nn::Module& module);

/// Copies tensors into the module by name; every parameter and buffer must be
/// present with a matching shape.
void load_module_state(torch::nn::Module& module, const NamedTensors& tensors,
                       const std::filesystem::path& origin);

void save_checkpoint(const std::filesystem::path& path, const std::string& kind,
                     const nlohmann::json& config, const nlohmann::json& meta,
                     const NamedTensors& tensors);

Checkpoint load_checkpoint(const std::filesystem::path& path);

/// Reads only the JSON header.
nlohmann::json read_checkpoint_header(const std::filesystem::path& path);

}  // namespace lumiforge
