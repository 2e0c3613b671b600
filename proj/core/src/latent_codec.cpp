// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "lumiforge/latent_codec.hpp"

#include <bit>
#include <cmath>

#include "lumiforge/error.hpp"
#include "lumiforge/rng.hpp"
#include "lumiforge/tensor_convert.hpp"

namespace lumiforge {

namespace nn = torch::nn;

void CodecConfig::validate() const {
  if (downsample < 1 || !std::has_single_bit(static_cast<unsigned>(downsample))) {
    throw InvalidArgument("codec downsample factor must be a power of two");
  }
  if (latent_channels < 1) throw InvalidArgument("codec needs at least one latent channel");
  if (kl_weight < 0.0) throw InvalidArgument("kl_weight must be non-negative");
  if (base_channels < 1 || text_dim < 1) throw InvalidArgument("codec widths must be positive");
}

nlohmann::json CodecConfig::to_json() const {
  return {{"f", downsample},
          {"c_lat", latent_channels},
          {"kl_weight", kl_weight},
          {"base_channels", base_channels},
          {"text_dim", text_dim}};
}

CodecConfig CodecConfig::from_json(const nlohmann::json& doc) {
  CodecConfig c;
  c.downsample = doc.value("f", c.downsample);
  c.latent_channels = doc.value("c_lat", c.latent_channels);
  c.kl_weight = doc.value("kl_weight", c.kl_weight);
  c.base_channels = doc.value("base_channels", c.base_channels);
  c.text_dim = doc.value("text_dim", c.text_dim);
  c.validate();
  return c;
}

namespace {

nn::Conv2d conv3x3(int in, int out, int stride = 1) {
  return nn::Conv2d(nn::Conv2dOptions(in, out, 3).stride(stride).padding(1));
}

constexpr int kPoolGrid = 4;

}  // namespace

LatentCodecImpl::LatentCodecImpl(const CodecConfig& config) : config_(config) {
  config_.validate();
  const int c = config_.base_channels;
  const int stages = std::countr_zero(static_cast<unsigned>(config_.downsample));

  // Stem at full resolution, one strided stage per factor of two.
  encoder_ = nn::Sequential(conv3x3(3, c), nn::SiLU());
  int width = c;
  for (int s = 0; s < stages; ++s) {
    const int next = std::min(width * 2, 4 * c);
    encoder_->push_back(conv3x3(width, next, 2));
    encoder_->push_back(nn::SiLU());
    encoder_->push_back(conv3x3(next, next));
    encoder_->push_back(nn::SiLU());
    width = next;
  }
  encoder_->push_back(conv3x3(width, 2 * config_.latent_channels));

  decoder_ = nn::Sequential(conv3x3(config_.latent_channels, width), nn::SiLU());
  for (int s = 0; s < stages; ++s) {
    const int next = std::max(width / 2, c);
    decoder_->push_back(nn::Upsample(
        nn::UpsampleOptions().scale_factor(std::vector<double>{2.0, 2.0}).mode(torch::kNearest)));
    decoder_->push_back(conv3x3(width, next));
    decoder_->push_back(nn::SiLU());
    decoder_->push_back(conv3x3(next, next));
    decoder_->push_back(nn::SiLU());
    width = next;
  }
  decoder_->push_back(conv3x3(width, 3));

  register_module("encoder", encoder_);
  register_module("decoder", decoder_);
  text_head_ = register_module(
      "text_head", nn::Linear(config_.latent_channels * kPoolGrid * kPoolGrid, config_.text_dim));
  latent_scale_ = register_buffer("latent_scale", torch::ones({1}));
}

std::pair<torch::Tensor, torch::Tensor> LatentCodecImpl::moments(const torch::Tensor& nchw) const {
  auto out = encoder_->forward(nchw * 2.0 - 1.0);
  auto parts = out.chunk(2, 1);
  return {parts[0], parts[1].clamp(-20.0, 10.0)};
}

torch::Tensor LatentCodecImpl::decode_raw(const torch::Tensor& latent_nchw) const {
  return (decoder_->forward(latent_nchw) + 1.0) * 0.5;
}

void LatentCodecImpl::check_input(const torch::Tensor& nhwc) const {
  if (nhwc.dim() != 4 || (nhwc.size(3) != 3 && nhwc.size(3) != 1)) {
    throw InvalidArgument("codec input must be (F, H, W, 3) or (F, H, W, 1)");
  }
  const int f = config_.downsample;
  if (nhwc.size(1) % f != 0 || nhwc.size(2) % f != 0) {
    throw InvalidArgument("frame size " + std::to_string(nhwc.size(1)) + "x" +
                          std::to_string(nhwc.size(2)) + " not divisible by f=" + std::to_string(f));
  }
}

LatentVideo LatentCodecImpl::encode(const torch::Tensor& video_nhwc) const {
  check_input(video_nhwc);
  auto nchw = replicate_rgb(video_nhwc).permute({0, 3, 1, 2}).contiguous();
  auto mean = moments(nchw).first * latent_scale_;
  return {mean, config_.downsample, config_.latent_channels};
}

torch::Tensor LatentCodecImpl::decode(const LatentVideo& latent) const {
  if (latent.data.dim() != 4 || latent.data.size(1) != config_.latent_channels) {
    throw InvalidArgument("latent must be (F, " + std::to_string(config_.latent_channels) +
                          ", h, w)");
  }
  auto img = decode_raw(latent.data / latent_scale_);
  return img.clamp(0.0, 1.0).permute({0, 2, 3, 1}).contiguous();
}

torch::Tensor LatentCodecImpl::embed_frames(const torch::Tensor& nchw) const {
  return embed_latent_mean(moments(nchw).first);
}

torch::Tensor LatentCodecImpl::embed_latent_mean(const torch::Tensor& mean) const {
  auto pooled = torch::adaptive_avg_pool2d(mean, {kPoolGrid, kPoolGrid}).flatten(1);
  return torch::nn::functional::normalize(
      text_head_->forward(pooled), torch::nn::functional::NormalizeFuncOptions().dim(1));
}

void LatentCodecImpl::set_latent_scale(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw InvalidArgument("latent scale must be positive");
  torch::NoGradGuard guard;
  latent_scale_.fill_(scale);
}

LatentCodec make_codec(const CodecConfig& config, std::uint64_t seed) {
  torch::manual_seed(seed);
  return LatentCodec(config);
}

std::vector<CodecStepLog> train_codec(LatentCodec& codec, const CodecTrainingData& data,
                                      const CodecTrainOptions& options,
                                      const std::function<void(const CodecStepLog&)>& on_step) {
  std::vector<CodecStepLog> log;
  if (options.steps <= 0) return log;
  if (!data.frames.defined() || data.frames.size(0) == 0) {
    throw InvalidArgument("codec training needs at least one frame");
  }
  codec->train();
  auto images = data.frames.permute({0, 3, 1, 2}).contiguous();
  if (data.canvases.defined() && data.canvases.size(0) > 0) {
    images = torch::cat({images, replicate_rgb(data.canvases).permute({0, 3, 1, 2})}, 0).contiguous();
  }
  const std::int64_t n_frames = data.frames.size(0);
  const std::int64_t n_total = images.size(0);
  const bool fit_text = data.caption_embeddings.defined();

  torch::optim::Adam optimizer(codec->parameters(), torch::optim::AdamOptions(options.lr));
  auto gen = at::make_generator<at::CPUGeneratorImpl>(mix_seed(options.seed, 0xC0DEC));
  Rng rng(mix_seed(options.seed, 0xBA7C4));
  const double kl_weight = codec->config().kl_weight;

  for (int step = 0; step < options.steps; ++step) {
    std::vector<std::int64_t> idx;
    for (int b = 0; b < options.batch; ++b) idx.push_back(static_cast<std::int64_t>(rng.below(n_total)));
    auto index = torch::tensor(idx, torch::kLong);
    auto x = images.index_select(0, index);

    auto [mean, logvar] = codec->moments(x);
    auto noise = torch::randn(mean.sizes(), gen, torch::kFloat32);
    auto z = mean + torch::exp(0.5 * logvar) * noise;
    auto recon = codec->decode_raw(z);
    auto mse = torch::mse_loss(recon, x);
    auto kl = 0.5 * (mean.pow(2) + logvar.exp() - 1.0 - logvar).sum({1, 2, 3}).mean();
    auto loss = mse + kl_weight * kl;

    if (fit_text) {
      auto frame_mask = index < n_frames;
      if (frame_mask.any().item<bool>()) {
        auto sel = frame_mask.nonzero().squeeze(1);
        auto pred = codec->embed_latent_mean(mean.index_select(0, sel).detach());
        auto target = data.caption_embeddings.index_select(0, index.index_select(0, sel));
        loss = loss + (1.0 - (pred * target).sum(1)).mean();
      }
    }

    optimizer.zero_grad();
    loss.backward();
    optimizer.step();

    CodecStepLog entry{step, loss.item<double>(), mse.item<double>(), kl.item<double>()};
    if (!std::isfinite(entry.loss)) {
      throw DivergenceError("codec loss diverged at step " + std::to_string(step) +
                            " (mse=" + std::to_string(entry.recon_mse) +
                            ", kl=" + std::to_string(entry.kl) + ")");
    }
    if (on_step) on_step(entry);
    log.push_back(entry);
  }

  codec->eval();
  torch::NoGradGuard guard;
  auto frames_nchw = data.frames.permute({0, 3, 1, 2}).contiguous();
  auto latents = codec->moments(frames_nchw).first;
  const double std = latents.std().item<double>();
  codec->set_latent_scale(std > 0.0 ? 1.0 / std : 1.0);
  return log;
}

double reconstruction_mae(const LatentCodec& codec, const torch::Tensor& video_nhwc) {
  torch::NoGradGuard guard;
  auto recon = codec->decode(codec->encode(video_nhwc));
  return (recon - video_nhwc).abs().mean().item<double>();
}

void save_codec(const LatentCodec& codec, const std::filesystem::path& path,
                const nlohmann::json& meta) {
  save_checkpoint(path, "codec", codec->config().to_json(), meta, module_state(*codec));
}

LatentCodec load_codec(const std::filesystem::path& path) {
  const Checkpoint ckpt = load_checkpoint(path);
  if (ckpt.kind() != "codec") throw IntegrityError("expected a codec checkpoint", path);
  LatentCodec codec(CodecConfig::from_json(ckpt.config()));
  load_module_state(*codec, ckpt.tensors, path);
  codec->eval();
  return codec;
}

}  // namespace lumiforge
