// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "lumiforge/trainer.hpp"

#include <cmath>
#include <fstream>

#include "lumiforge/error.hpp"
#include "lumiforge/losses.hpp"
#include "lumiforge/text_embedding.hpp"

namespace lumiforge {

namespace F = torch::nn::functional;

std::string_view to_string(Z0Mode mode) {
  return mode == Z0Mode::kPaper ? "paper" : "alpha_weighted";
}

Z0Mode z0_mode_from_string(std::string_view name) {
  if (name == "paper") return Z0Mode::kPaper;
  if (name == "alpha_weighted") return Z0Mode::kAlphaWeighted;
  throw InvalidArgument("unknown z0_mode '" + std::string(name) + "'");
}

torch::Tensor text_tensor(const std::string& caption, int text_dim) {
  auto v = embed_text(caption, text_dim);
  return torch::tensor(v, torch::kFloat32).view({1, text_dim});
}

namespace {

torch::Tensor caption_rows(const Caption& base, const std::vector<Caption>& variants, int text_dim) {
  std::vector<torch::Tensor> rows{text_tensor(base.text, text_dim)};
  for (const auto& v : variants) rows.push_back(text_tensor(v.text, text_dim));
  return torch::cat(rows, 0);
}

torch::Tensor encode_batch(const LatentCodec& codec, const torch::Tensor& video_nhwc) {
  return codec->encode(video_nhwc).data.unsqueeze(0);
}

}  // namespace

TrainingSet prepare_training_set(const DatasetManifest& manifest, const LatentCodec& codec,
                                 int text_dim) {
  if (manifest.samples.empty()) throw InvalidArgument("dataset has no samples");
  torch::NoGradGuard guard;
  std::vector<torch::Tensor> frames, canvases, base;
  TrainingSet set;
  for (const auto& rec : manifest.samples) {
    const TrainingSample s = load_sample(manifest, rec.sample_id);
    frames.push_back(encode_batch(codec, s.frames));
    canvases.push_back(encode_batch(codec, s.canvases));
    base.push_back(text_tensor(s.caption.text, text_dim));
    auto rows = caption_rows(s.caption, s.caption_variants, text_dim);
    set.variant_text.push_back(rows.slice(0, 1));
    set.sample_ids.push_back(s.sample_id);
  }
  set.frame_latents = torch::cat(frames, 0);
  set.canvas_latents = torch::cat(canvases, 0);
  set.base_text = torch::cat(base, 0);
  return set;
}

torch::Tensor augment_video(const torch::Tensor& video_nhwc, std::uint64_t seed) {
  Rng rng(seed);
  const auto H = video_nhwc.size(1);
  const auto W = video_nhwc.size(2);
  const double s = rng.uniform(0.75, 1.0);
  const auto ch = std::max<std::int64_t>(1, std::llround(s * static_cast<double>(H)));
  const auto cw = std::max<std::int64_t>(1, std::llround(s * static_cast<double>(W)));
  const auto y0 = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(H - ch + 1)));
  const auto x0 = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(W - cw + 1)));
  auto nchw = video_nhwc.slice(1, y0, y0 + ch).slice(2, x0, x0 + cw).permute({0, 3, 1, 2});
  auto resized = F::interpolate(nchw.contiguous(), F::InterpolateFuncOptions()
                                                       .size(std::vector<std::int64_t>{H, W})
                                                       .mode(torch::kBilinear)
                                                       .align_corners(false));
  const auto C = video_nhwc.size(3);
  std::vector<float> gains;
  const double brightness = rng.uniform(0.8, 1.2);
  for (std::int64_t c = 0; c < C; ++c) gains.push_back(static_cast<float>(brightness * rng.uniform(0.9, 1.1)));
  auto g = torch::tensor(gains).view({1, C, 1, 1});
  return (resized * g).clamp(0.0, 1.0).permute({0, 2, 3, 1}).contiguous();
}

BackboneCorpus prepare_backbone_corpus(const DatasetManifest& manifest, const LatentCodec& codec,
                                       int text_dim, int augment_copies, std::uint64_t seed) {
  if (manifest.samples.empty()) throw InvalidArgument("dataset has no samples");
  torch::NoGradGuard guard;
  std::vector<torch::Tensor> latents;
  BackboneCorpus corpus;
  std::uint64_t n = 0;
  for (const auto& rec : manifest.samples) {
    const TrainingSample s = load_sample(manifest, rec.sample_id);
    auto captions = caption_rows(s.caption, s.caption_variants, text_dim);
    latents.push_back(encode_batch(codec, s.frames));
    corpus.captions.push_back(captions);
    for (int c = 0; c < augment_copies; ++c) {
      latents.push_back(encode_batch(codec, augment_video(s.frames, mix_seed(seed, n++))));
      corpus.captions.push_back(captions);
    }
  }
  corpus.latents = torch::cat(latents, 0);
  return corpus;
}

std::vector<StepLog> train_backbone(VideoDiT& backbone, const torch::Tensor& latents,
                                    const std::vector<torch::Tensor>& captions,
                                    const Schedule& schedule, const BackboneTrainOptions& options,
                                    const std::function<void(const StepLog&)>& on_step) {
  std::vector<StepLog> log;
  if (options.steps <= 0) return log;
  const std::int64_t n = latents.size(0);
  if (n == 0 || static_cast<std::int64_t>(captions.size()) != n) {
    throw InvalidArgument("backbone warmup needs one caption set per video");
  }
  backbone->train();
  torch::optim::Adam optimizer(backbone->parameters(), torch::optim::AdamOptions(options.lr));
  auto gen = at::make_generator<at::CPUGeneratorImpl>(mix_seed(options.seed, 0xD17));
  Rng rng(mix_seed(options.seed, 0xBA7C4));

  for (int step = 0; step < options.steps; ++step) {
    std::vector<std::int64_t> idx;
    std::vector<torch::Tensor> text;
    std::vector<bool> drop;
    for (int b = 0; b < options.batch; ++b) {
      const auto i = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(n)));
      idx.push_back(i);
      const auto& rows = captions[static_cast<std::size_t>(i)];
      text.push_back(rows[static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(rows.size(0))))]);
      drop.push_back(rng.uniform() < options.text_dropout);
    }
    auto z0 = latents.index_select(0, torch::tensor(idx, torch::kLong));
    auto drop_mask = torch::tensor(std::vector<std::int64_t>(drop.begin(), drop.end()), torch::kLong);
    auto text_batch = backbone->text_or_null(torch::stack(text), drop_mask);
    auto t = torch::randint(1, schedule.steps() + 1, {options.batch}, gen, torch::kLong);
    auto eps = torch::randn(z0.sizes(), gen, torch::kFloat32);
    auto z_t = q_sample(z0, t, eps, schedule);
    auto loss = denoise_loss(backbone->forward(z_t, t, text_batch), eps);

    optimizer.zero_grad();
    loss.backward();
    optimizer.step();

    StepLog entry{step, loss.item<double>(), loss.item<double>(), 0.0};
    if (!std::isfinite(entry.loss_total)) {
      throw DivergenceError("backbone loss diverged at step " + std::to_string(step));
    }
    if (on_step) on_step(entry);
    log.push_back(entry);
  }
  backbone->eval();
  return log;
}

void TrainConfig::validate() const {
  if (!(beta >= 0.0)) throw InvalidArgument("beta must be non-negative");
  if (!(lr > 0.0)) throw InvalidArgument("lr must be positive");
  if (steps < 0 || batch < 1) throw InvalidArgument("steps >= 0 and batch >= 1 required");
  if (light_scale < 0.0 || light_scale > 1.0) throw InvalidArgument("light_scale must lie in [0, 1]");
}

nlohmann::json TrainConfig::to_json() const {
  return {{"beta", beta},
          {"lr", lr},
          {"steps", steps},
          {"batch", batch},
          {"seed", seed},
          {"z0_mode", std::string(to_string(z0_mode))},
          {"enable_dis_loss", enable_dis_loss},
          {"enable_caption_aug", enable_caption_aug},
          {"light_scale", light_scale}};
}

torch::Tensor z0_estimate(const torch::Tensor& z_t, const torch::Tensor& eps, const torch::Tensor& t,
                          const Schedule& schedule, Z0Mode mode) {
  if (mode == Z0Mode::kPaper) return z_t - eps;
  std::vector<std::int64_t> shape(static_cast<std::size_t>(z_t.dim()), 1);
  shape[0] = z_t.size(0);
  auto ab = schedule.alpha_bar(t).to(torch::kFloat64).view(shape);
  return (z_t - torch::sqrt(1.0 - ab).to(z_t.dtype()) * eps) / torch::sqrt(ab).to(z_t.dtype());
}

DualBranchOutput dual_branch_forward(VideoDiT& backbone, LightEncoder& light,
                                     const torch::Tensor& z0, const torch::Tensor& canvas_latents,
                                     const torch::Tensor& text, const torch::Tensor& t,
                                     const torch::Tensor& eps, const Schedule& schedule,
                                     const TrainConfig& config) {
  DualBranchOutput out;
  out.z_t = q_sample(z0, t, eps, schedule).to(z0.dtype());
  LightInjector injector(*light, light->encode(canvas_latents), config.light_scale);
  out.eps_pred = backbone->forward(out.z_t, t, text, &injector);
  {
    torch::NoGradGuard guard;
    out.eps_reg = backbone->forward(out.z_t, t, text);
  }
  out.z0_pred = z0_estimate(out.z_t, out.eps_pred, t, schedule, config.z0_mode);
  out.z0_reg = z0_estimate(out.z_t, out.eps_reg, t, schedule, config.z0_mode);
  out.loss_denoise = denoise_loss(out.eps_pred, eps);
  out.loss_dis = disentanglement_loss(out.z0_pred, out.z0_reg);
  const double beta = config.enable_dis_loss ? config.beta : 0.0;
  out.loss_total = out.loss_denoise + beta * out.loss_dis;
  return out;
}

void freeze(torch::nn::Module& module) {
  for (auto& p : module.parameters()) p.set_requires_grad(false);
}

LightTrainer::LightTrainer(VideoDiT backbone, LightEncoder light, Schedule schedule, TrainConfig config)
    : backbone_(std::move(backbone)),
      light_(std::move(light)),
      schedule_(std::move(schedule)),
      config_(config),
      optimizer_(light_->parameters(), torch::optim::AdamOptions(config.lr)),
      gen_(at::make_generator<at::CPUGeneratorImpl>(mix_seed(config.seed, 0x11647))),
      rng_(mix_seed(config.seed, 0xBA7C4)) {
  config_.validate();
  light_->config().check_pairing(backbone_->config());
  freeze(*backbone_);
  backbone_->eval();
  light_->train();
}

torch::Tensor LightTrainer::pick_text(const TrainingSet& data, std::int64_t sample) {
  const auto& variants = data.variant_text[static_cast<std::size_t>(sample)];
  if (!config_.enable_caption_aug || !variants.defined() || variants.size(0) == 0) {
    return data.base_text[sample];
  }
  const auto k = static_cast<std::int64_t>(rng_.below(static_cast<std::uint64_t>(variants.size(0) + 1)));
  return k == 0 ? data.base_text[sample] : variants[k - 1];
}

StepLog LightTrainer::step(const TrainingSet& data, const std::vector<std::int64_t>& indices) {
  std::vector<torch::Tensor> text;
  for (auto i : indices) text.push_back(pick_text(data, i));
  auto index = torch::tensor(indices, torch::kLong);
  auto z0 = data.frame_latents.index_select(0, index);
  auto canvases = data.canvas_latents.index_select(0, index);
  const auto B = static_cast<std::int64_t>(indices.size());
  auto t = torch::randint(1, schedule_.steps() + 1, {B}, gen_, torch::kLong);
  auto eps = torch::randn(z0.sizes(), gen_, torch::kFloat32);

  auto out = dual_branch_forward(backbone_, light_, z0, canvases, torch::stack(text), t, eps,
                                 schedule_, config_);
  StepLog entry{step_, out.loss_total.item<double>(), out.loss_denoise.item<double>(),
                out.loss_dis.item<double>()};
  if (!std::isfinite(entry.loss_total)) {
    throw DivergenceError("loss diverged at step " + std::to_string(step_) +
                          " (denoise=" + std::to_string(entry.loss_denoise) +
                          ", dis=" + std::to_string(entry.loss_dis) + ")");
  }
  optimizer_.zero_grad();
  out.loss_total.backward();
  optimizer_.step();
  ++step_;
  return entry;
}

std::vector<StepLog> LightTrainer::run(const TrainingSet& data,
                                       const std::function<void(const StepLog&)>& on_step) {
  if (data.size() == 0) throw InvalidArgument("training set is empty");
  std::vector<StepLog> log;
  for (int s = 0; s < config_.steps; ++s) {
    std::vector<std::int64_t> indices;
    for (int b = 0; b < config_.batch; ++b) {
      indices.push_back(static_cast<std::int64_t>(rng_.below(static_cast<std::uint64_t>(data.size()))));
    }
    log.push_back(step(data, indices));
    if (on_step) on_step(log.back());
  }
  light_->eval();
  return log;
}

void write_loss_log(const std::filesystem::path& path, const std::vector<StepLog>& log) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write loss log", path);
  out << "step,loss_total,loss_denoise,loss_dis\n";
  out.precision(9);
  for (const auto& e : log) {
    out << e.step << ',' << e.loss_total << ',' << e.loss_denoise << ',' << e.loss_dis << '\n';
  }
}

}  // namespace lumiforge
