// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "lumiforge/experiment.hpp"
#include "lumiforge/run_config.hpp"

namespace lumiforge {

// One function per pipeline stage; each reads its inputs from the paths in
// the run config and writes its outputs there.

using ProgressFn = std::function<void(const std::string&)>;

DatasetManifest run_generate_dataset(const RunConfig& rc);

/// Trains the codec on every frame and canvas of the dataset.
std::vector<CodecStepLog> run_train_codec(const RunConfig& rc, const ProgressFn& progress = {});

std::vector<StepLog> run_train_backbone(const RunConfig& rc, const ProgressFn& progress = {});

struct TrainOverrides {
  std::optional<bool> enable_dis_loss;
  std::optional<bool> enable_caption_aug;
  std::optional<std::filesystem::path> checkpoint;
  std::optional<std::filesystem::path> log;
};

std::vector<StepLog> run_train(const RunConfig& rc, const TrainOverrides& overrides = {},
                               const ProgressFn& progress = {});

/// Loads codec and backbone, plus the light encoder unless light_checkpoint
/// is empty.
PipelineModels load_pipeline(const RunConfig& rc, const std::filesystem::path& light_checkpoint);

/// Writes frame_*.png, conditioning/canvas_*.png, metadata.json and
/// optionally strip.png into out_dir.
void write_sample(const std::filesystem::path& out_dir, const std::vector<Image>& video,
                  const std::vector<Image>& canvases, const nlohmann::json& metadata, bool strip);

/// Evaluates a directory of frame_*.png against a reference directory. The
/// direction reference is canvas_*.png when present, else frame_*.png; the
/// brightness reference is frame_*.png when present, else canvas_*.png.
MetricsReport evaluate_directories(const std::filesystem::path& video_dir,
                                   const std::filesystem::path& reference_dir,
                                   const std::optional<std::string>& caption,
                                   const std::optional<std::pair<FrameEmbedder, TextEmbedder>>& joint);

std::vector<Image> read_frames(const std::filesystem::path& dir, const std::string& prefix);

}  // namespace lumiforge
