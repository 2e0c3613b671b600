// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <torch/torch.h>

#include "lumiforge/caption.hpp"
#include "lumiforge/light_grid.hpp"

namespace lumiforge {

inline constexpr const char* kManifestVersion = "1";

struct SampleRecord {
  std::string sample_id;
  int subject_id = 0;
  std::string trajectory_path;  // relative to the dataset root
  std::string frames_dir;
  std::string canvases_dir;
  Caption caption;
  std::vector<Caption> caption_variants;
  int n_frames = 0;
  int resolution = 0;
};

struct DatasetManifest {
  std::string version = kManifestVersion;
  LightGrid grid;
  std::uint64_t seed = 0;
  double fps = 8.0;
  std::vector<SampleRecord> samples;
  std::filesystem::path root;  // directory holding manifest.json; not serialized

  nlohmann::json to_json() const;
  static DatasetManifest from_json(const nlohmann::json& doc, std::filesystem::path root);

  const SampleRecord& find(const std::string& sample_id) const;
};

struct BuildOptions {
  std::vector<int> subjects;
  std::vector<std::filesystem::path> trajectories;
  int frames_per_video = 16;
  int resolution = 64;
  std::filesystem::path out_dir;
  std::uint64_t seed = 0;
  int caption_variants = 8;
  bool caption_augmentation = true;
  double fps = 8.0;
};

/// Nearest-index resampling of every track to n_frames points.
MultiLightTrajectory resample(const MultiLightTrajectory& trajectory, int n_frames);

/// Renders every (subject, trajectory) pair into out_dir. Work happens in a
/// sibling "<out_dir>.tmp" directory that replaces out_dir on success and is
/// removed on failure. Frames shared between trajectories of one subject are
/// stored once and hard-linked into each video directory.
DatasetManifest build_dataset(const BuildOptions& options);

/// Subjects x trajectories x videos-per-pair, the dataset size formula.
std::uint64_t dataset_video_count(std::uint64_t subjects, std::uint64_t trajectories_per_subject);

DatasetManifest load_manifest(const std::filesystem::path& manifest_or_dir);

struct TrainingSample {
  std::string sample_id;
  torch::Tensor frames;    // (F, H, W, 3) in [0,1]
  torch::Tensor canvases;  // (F, H, W, 1) in [0,1]
  Caption caption;
  std::vector<Caption> caption_variants;
};

TrainingSample load_sample(const DatasetManifest& manifest, const std::string& sample_id);

}  // namespace lumiforge
