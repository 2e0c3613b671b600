// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lumiforge/dataset_builder.hpp"
#include "lumiforge/latent_codec.hpp"
#include "lumiforge/sampler.hpp"
#include "lumiforge/trainer.hpp"
#include "lumiforge/video_dit.hpp"

namespace lumiforge {

inline constexpr int kSchemaVersion = 1;

struct AblationVariant {
  std::string name;
  std::filesystem::path checkpoint;  // light encoder blob
};

struct SweepConfig {
  std::vector<double> light_scales{0.1, 0.3, 0.5, 0.7, 0.9};
  std::vector<AblationVariant> ablations;
  int heldout_pairs = 20;
  std::filesystem::path out_dir;
};

/// Every path is absolute after parsing: relative entries resolve against
/// workdir, which itself resolves against the config file's directory.
struct RunConfig {
  std::uint64_t seed = 0;
  std::filesystem::path workdir;

  BuildOptions dataset;

  CodecConfig codec;
  CodecTrainOptions codec_train;
  std::filesystem::path codec_checkpoint;
  std::filesystem::path codec_log;

  DiTConfig dit;
  BackboneTrainOptions backbone_train;
  std::filesystem::path backbone_checkpoint;
  std::filesystem::path backbone_log;

  TrainConfig train;
  std::filesystem::path light_checkpoint;
  std::filesystem::path train_log;

  SampleConfig sample;
  SweepConfig sweep;

  /// The validated document with defaults filled in and the seed override applied.
  nlohmann::json document;

  std::filesystem::path manifest_path() const { return dataset.out_dir / "manifest.json"; }
};

/// Checks doc against the schema (unknown keys and type mismatches throw
/// ConfigError naming the JSON pointer) and builds the typed config.
/// seed_override replaces the top-level seed when set.
RunConfig parse_run_config(const nlohmann::json& doc, const std::filesystem::path& base_dir,
                           std::optional<std::uint64_t> seed_override = std::nullopt);

/// Reads the file and applies LUMIFORGE_SEED from the environment.
RunConfig load_run_config(const std::filesystem::path& path);

/// The schema as a JSON document: leaves name the expected type.
const nlohmann::json& run_config_schema();

}  // namespace lumiforge
