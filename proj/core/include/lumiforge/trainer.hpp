// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <torch/torch.h>

#include "lumiforge/dataset_builder.hpp"
#include "lumiforge/latent_codec.hpp"
#include "lumiforge/light_encoder.hpp"
#include "lumiforge/rng.hpp"
#include "lumiforge/schedule.hpp"
#include "lumiforge/video_dit.hpp"

namespace lumiforge {

enum class Z0Mode { kPaper, kAlphaWeighted };

std::string_view to_string(Z0Mode mode);
Z0Mode z0_mode_from_string(std::string_view name);

/// Latent-space view of a dataset: everything the diffusion stages consume.
struct TrainingSet {
  torch::Tensor frame_latents;   // (S, F, C, h, w)
  torch::Tensor canvas_latents;  // (S, F, C, h, w)
  torch::Tensor base_text;       // (S, text_dim)
  std::vector<torch::Tensor> variant_text;  // per sample (V, text_dim), V may be 0
  std::vector<std::string> sample_ids;

  std::int64_t size() const { return frame_latents.size(0); }
};

TrainingSet prepare_training_set(const DatasetManifest& manifest, const LatentCodec& codec,
                                 int text_dim);

/// Encodes a caption as a (1, text_dim) tensor.
torch::Tensor text_tensor(const std::string& caption, int text_dim);

/// Random crop (scale in [0.75, 1]) resized back, plus brightness and
/// per-channel gain jitter. One draw per video, shared by all its frames.
torch::Tensor augment_video(const torch::Tensor& video_nhwc, std::uint64_t seed);

struct BackboneTrainOptions {
  int steps = 2000;
  int batch = 2;
  double lr = 2e-4;
  std::uint64_t seed = 0;
  double text_dropout = 0.1;
  int augment_copies = 2;  // jittered copies per video added to the warmup data
};

struct StepLog {
  int step = 0;
  double loss_total = 0.0;
  double loss_denoise = 0.0;
  double loss_dis = 0.0;
};

/// Plain text-conditioned denoising of frame latents, no light module.
std::vector<StepLog> train_backbone(VideoDiT& backbone, const torch::Tensor& latents,
                                    const std::vector<torch::Tensor>& captions,
                                    const Schedule& schedule, const BackboneTrainOptions& options,
                                    const std::function<void(const StepLog&)>& on_step = {});

/// Warmup corpus: the dataset videos plus augment_copies jittered copies of each.
struct BackboneCorpus {
  torch::Tensor latents;                // (N, F, C, h, w)
  std::vector<torch::Tensor> captions;  // per video (V, text_dim), at least one row
};

BackboneCorpus prepare_backbone_corpus(const DatasetManifest& manifest, const LatentCodec& codec,
                                       int text_dim, int augment_copies, std::uint64_t seed);

struct TrainConfig {
  double beta = 3.0;
  double lr = 1e-4;
  int steps = 1500;
  int batch = 2;
  std::uint64_t seed = 0;
  Z0Mode z0_mode = Z0Mode::kPaper;
  bool enable_dis_loss = true;
  bool enable_caption_aug = true;
  double light_scale = kDefaultLightScale;

  void validate() const;
  nlohmann::json to_json() const;
};

struct DualBranchOutput {
  torch::Tensor z_t;
  torch::Tensor eps_pred;
  torch::Tensor eps_reg;
  torch::Tensor z0_pred;
  torch::Tensor z0_reg;
  torch::Tensor loss_denoise;
  torch::Tensor loss_dis;
  torch::Tensor loss_total;
};

torch::Tensor z0_estimate(const torch::Tensor& z_t, const torch::Tensor& eps, const torch::Tensor& t,
                          const Schedule& schedule, Z0Mode mode);

/// Both branches on identical (z_t, t, text). The reference branch runs the
/// backbone without injection under NoGradGuard.
DualBranchOutput dual_branch_forward(VideoDiT& backbone, LightEncoder& light,
                                     const torch::Tensor& z0, const torch::Tensor& canvas_latents,
                                     const torch::Tensor& text, const torch::Tensor& t,
                                     const torch::Tensor& eps, const Schedule& schedule,
                                     const TrainConfig& config);

/// Marks every backbone parameter as not requiring gradients.
void freeze(torch::nn::Module& module);

class LightTrainer {
 public:
  LightTrainer(VideoDiT backbone, LightEncoder light, Schedule schedule, TrainConfig config);

  /// One dual-branch update on the given sample indices. Throws
  /// DivergenceError on a non-finite loss.
  StepLog step(const TrainingSet& data, const std::vector<std::int64_t>& indices);

  std::vector<StepLog> run(const TrainingSet& data,
                           const std::function<void(const StepLog&)>& on_step = {});

  const LightEncoder& light() const { return light_; }
  const VideoDiT& backbone() const { return backbone_; }

 private:
  torch::Tensor pick_text(const TrainingSet& data, std::int64_t sample);

  VideoDiT backbone_;
  LightEncoder light_;
  Schedule schedule_;
  TrainConfig config_;
  torch::optim::Adam optimizer_;
  at::Generator gen_;
  Rng rng_;
  int step_ = 0;
};

/// CSV with header step,loss_total,loss_denoise,loss_dis.
void write_loss_log(const std::filesystem::path& path, const std::vector<StepLog>& log);

}  // namespace lumiforge
