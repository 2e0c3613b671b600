// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "lumiforge/pipeline.hpp"

#include <algorithm>
#include <fstream>

#include "lumiforge/error.hpp"
#include "lumiforge/image_io.hpp"
#include "lumiforge/tensor_convert.hpp"
#include "lumiforge/text_embedding.hpp"

namespace lumiforge {

namespace fs = std::filesystem;

namespace {

void ensure_parent(const fs::path& file) {
  if (file.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(file.parent_path(), ec);
    if (ec) throw IoError("cannot create directory (" + ec.message() + ")", file.parent_path());
  }
}

void report(const ProgressFn& progress, const std::string& line) {
  if (progress) progress(line);
}

bool log_this(int step, int total) { return step == 0 || (step + 1) % 100 == 0 || step + 1 == total; }

}  // namespace

DatasetManifest run_generate_dataset(const RunConfig& rc) {
  if (rc.dataset.trajectories.empty()) throw ConfigError("no trajectories listed", "/dataset/trajectories");
  return build_dataset(rc.dataset);
}

std::vector<CodecStepLog> run_train_codec(const RunConfig& rc, const ProgressFn& progress) {
  const DatasetManifest manifest = load_manifest(rc.manifest_path());
  std::vector<torch::Tensor> frames, canvases, captions;
  for (const auto& rec : manifest.samples) {
    const TrainingSample s = load_sample(manifest, rec.sample_id);
    frames.push_back(s.frames);
    canvases.push_back(s.canvases);
    captions.push_back(
        text_tensor(s.caption.text, rc.codec.text_dim).expand({s.frames.size(0), rc.codec.text_dim}));
  }
  CodecTrainingData data{torch::cat(frames), torch::cat(canvases), torch::cat(captions)};
  LatentCodec codec = make_codec(rc.codec, rc.codec_train.seed);
  auto log = train_codec(codec, data, rc.codec_train, [&](const CodecStepLog& e) {
    if (log_this(e.step, rc.codec_train.steps)) {
      report(progress, "codec step " + std::to_string(e.step) + " loss " + std::to_string(e.loss));
    }
  });
  ensure_parent(rc.codec_checkpoint);
  nlohmann::json meta{{"steps", rc.codec_train.steps},
                      {"seed", rc.codec_train.seed},
                      {"final_loss", log.empty() ? 0.0 : log.back().loss},
                      {"latent_scale", codec->latent_scale()}};
  save_codec(codec, rc.codec_checkpoint, meta);

  ensure_parent(rc.codec_log);
  std::ofstream out(rc.codec_log);
  if (!out) throw IoError("cannot write loss log", rc.codec_log);
  out << "step,loss,recon_mse,kl\n";
  out.precision(9);
  for (const auto& e : log) out << e.step << ',' << e.loss << ',' << e.recon_mse << ',' << e.kl << '\n';
  return log;
}

std::vector<StepLog> run_train_backbone(const RunConfig& rc, const ProgressFn& progress) {
  const DatasetManifest manifest = load_manifest(rc.manifest_path());
  const LatentCodec codec = load_codec(rc.codec_checkpoint);
  const BackboneCorpus corpus = prepare_backbone_corpus(
      manifest, codec, rc.dit.text_dim, rc.backbone_train.augment_copies, rc.backbone_train.seed);
  VideoDiT dit = make_dit(rc.dit, rc.backbone_train.seed);
  const Schedule schedule(rc.dit.schedule);
  auto log = train_backbone(dit, corpus.latents, corpus.captions, schedule, rc.backbone_train,
                            [&](const StepLog& e) {
                              if (log_this(e.step, rc.backbone_train.steps)) {
                                report(progress, "backbone step " + std::to_string(e.step) + " loss " +
                                                     std::to_string(e.loss_denoise));
                              }
                            });
  ensure_parent(rc.backbone_checkpoint);
  save_dit(dit, rc.backbone_checkpoint,
           {{"steps", rc.backbone_train.steps},
            {"seed", rc.backbone_train.seed},
            {"final_loss", log.empty() ? 0.0 : log.back().loss_denoise}});
  ensure_parent(rc.backbone_log);
  write_loss_log(rc.backbone_log, log);
  return log;
}

std::vector<StepLog> run_train(const RunConfig& rc, const TrainOverrides& overrides,
                               const ProgressFn& progress) {
  TrainConfig config = rc.train;
  if (overrides.enable_dis_loss) config.enable_dis_loss = *overrides.enable_dis_loss;
  if (overrides.enable_caption_aug) config.enable_caption_aug = *overrides.enable_caption_aug;
  const fs::path checkpoint = overrides.checkpoint.value_or(rc.light_checkpoint);
  const fs::path log_path = overrides.log.value_or(rc.train_log);

  const DatasetManifest manifest = load_manifest(rc.manifest_path());
  const LatentCodec codec = load_codec(rc.codec_checkpoint);
  VideoDiT backbone = load_dit(rc.backbone_checkpoint);
  const TrainingSet data = prepare_training_set(manifest, codec, backbone->config().text_dim);
  LightEncoder light = make_light_encoder(LightEncoderConfig::matching(backbone->config()), config.seed);
  LightTrainer trainer(backbone, light, Schedule(backbone->config().schedule), config);
  auto log = trainer.run(data, [&](const StepLog& e) {
    if (log_this(e.step, config.steps)) {
      report(progress, "train step " + std::to_string(e.step) + " total " + std::to_string(e.loss_total) +
                           " denoise " + std::to_string(e.loss_denoise) + " dis " +
                           std::to_string(e.loss_dis));
    }
  });
  ensure_parent(checkpoint);
  save_light_encoder(light, checkpoint,
                     {{"train", config.to_json()},
                      {"final_loss", log.empty() ? 0.0 : log.back().loss_total}});
  ensure_parent(log_path);
  write_loss_log(log_path, log);
  return log;
}

PipelineModels load_pipeline(const RunConfig& rc, const fs::path& light_checkpoint) {
  PipelineModels models;
  models.codec = load_codec(rc.codec_checkpoint);
  models.diffusion.backbone = load_dit(rc.backbone_checkpoint);
  if (!light_checkpoint.empty()) {
    models.diffusion.light = load_light_encoder(light_checkpoint);
    models.diffusion.light->config().check_pairing(models.diffusion.backbone->config());
  }
  return models;
}

void write_sample(const fs::path& out_dir, const std::vector<Image>& video,
                  const std::vector<Image>& canvases, const nlohmann::json& metadata, bool strip) {
  std::error_code ec;
  fs::create_directories(out_dir / "conditioning", ec);
  if (ec) throw IoError("cannot create output directory (" + ec.message() + ")", out_dir);
  char name[64];
  for (std::size_t t = 0; t < video.size(); ++t) {
    std::snprintf(name, sizeof(name), "frame_%05zu.png", t);
    write_png(video[t], out_dir / name);
  }
  for (std::size_t t = 0; t < canvases.size(); ++t) {
    std::snprintf(name, sizeof(name), "canvas_%05zu.png", t);
    write_png(canvases[t], out_dir / "conditioning" / name);
  }
  if (strip) write_png(film_strip(video), out_dir / "strip.png");
  std::ofstream meta(out_dir / "metadata.json");
  meta << metadata.dump(2) << "\n";
  if (!meta) throw IoError("cannot write metadata", out_dir / "metadata.json");
}

std::vector<Image> read_frames(const fs::path& dir, const std::string& prefix) {
  if (!fs::is_directory(dir)) throw NotFound("directory not found: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind(prefix + "_", 0) == 0 && entry.path().extension() == ".png") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Image> images;
  for (const auto& f : files) images.push_back(read_png(f));
  return images;
}

MetricsReport evaluate_directories(const fs::path& video_dir, const fs::path& reference_dir,
                                   const std::optional<std::string>& caption,
                                   const std::optional<std::pair<FrameEmbedder, TextEmbedder>>& joint) {
  EvaluationInputs inputs;
  inputs.video = read_frames(video_dir, "frame");
  if (inputs.video.empty()) throw NotFound("no frame_*.png in " + video_dir.string());
  auto ref_frames = read_frames(reference_dir, "frame");
  auto ref_canvases = read_frames(reference_dir, "canvas");
  if (ref_frames.empty() && ref_canvases.empty()) {
    throw NotFound("no frame_*.png or canvas_*.png in " + reference_dir.string());
  }
  inputs.direction_reference = ref_canvases.empty() ? ref_frames : ref_canvases;
  inputs.brightness_reference = ref_frames.empty() ? ref_canvases : ref_frames;
  inputs.caption = caption;
  return evaluate(inputs, random_projection_embedder(), joint);
}

}  // namespace lumiforge
