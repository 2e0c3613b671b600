// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "lumiforge/light_encoder.hpp"

#include "lumiforge/checkpoint.hpp"
#include "lumiforge/error.hpp"

namespace lumiforge {

namespace nn = torch::nn;

LightEncoderConfig LightEncoderConfig::matching(const DiTConfig& backbone) {
  LightEncoderConfig c;
  c.n_layers = backbone.n_layers;
  c.d_model = backbone.d_model;
  c.n_heads = backbone.n_heads;
  c.patch = backbone.patch;
  c.mlp_ratio = backbone.mlp_ratio;
  c.latent_channels = backbone.latent_channels;
  c.positional_encoding = backbone.positional_encoding;
  return c;
}

void LightEncoderConfig::validate() const {
  if (n_layers < 1) throw InvalidArgument("light encoder needs at least one layer");
  if (d_model < 1 || n_heads < 1 || d_model % n_heads != 0) {
    throw InvalidArgument("d_model must be a positive multiple of n_heads");
  }
  if (patch < 1 || mlp_ratio < 1 || latent_channels < 1) {
    throw InvalidArgument("light encoder sizes must be positive");
  }
  if (guidance_scale_default < 0.0 || guidance_scale_default > 1.0) {
    throw InvalidArgument("light scale must lie in [0, 1]");
  }
}

void LightEncoderConfig::check_pairing(const DiTConfig& backbone) const {
  if (n_layers != backbone.n_layers || d_model != backbone.d_model || patch != backbone.patch ||
      latent_channels != backbone.latent_channels) {
    throw InvalidArgument("light encoder (" + std::to_string(n_layers) + " layers, d=" +
                          std::to_string(d_model) + ") does not match backbone (" +
                          std::to_string(backbone.n_layers) + " layers, d=" +
                          std::to_string(backbone.d_model) + ")");
  }
}

nlohmann::json LightEncoderConfig::to_json() const {
  return {{"n_layers", n_layers},
          {"d_model", d_model},
          {"n_heads", n_heads},
          {"patch", patch},
          {"mlp_ratio", mlp_ratio},
          {"latent_channels", latent_channels},
          {"positional_encoding", positional_encoding},
          {"guidance_scale_default", guidance_scale_default}};
}

LightEncoderConfig LightEncoderConfig::from_json(const nlohmann::json& doc) {
  LightEncoderConfig c;
  c.n_layers = doc.value("n_layers", c.n_layers);
  c.d_model = doc.value("d_model", c.d_model);
  c.n_heads = doc.value("n_heads", c.n_heads);
  c.patch = doc.value("patch", c.patch);
  c.mlp_ratio = doc.value("mlp_ratio", c.mlp_ratio);
  c.latent_channels = doc.value("latent_channels", c.latent_channels);
  c.positional_encoding = doc.value("positional_encoding", c.positional_encoding);
  c.guidance_scale_default = doc.value("guidance_scale_default", c.guidance_scale_default);
  c.validate();
  return c;
}

LightBlockImpl::LightBlockImpl(int d_model, int n_heads, int mlp_ratio) {
  norm1_ = register_module("norm1", nn::LayerNorm(nn::LayerNormOptions({d_model}).eps(1e-6)));
  norm2_ = register_module("norm2", nn::LayerNorm(nn::LayerNormOptions({d_model}).eps(1e-6)));
  attn_ = register_module("attn", MultiHeadAttention(d_model, n_heads));
  mlp_ = register_module("mlp", FeedForward(d_model, mlp_ratio));
}

torch::Tensor LightBlockImpl::forward(const torch::Tensor& x) {
  auto h = x + attn_->forward(norm1_->forward(x));
  return h + mlp_->forward(norm2_->forward(h));
}

LightEncoderImpl::LightEncoderImpl(const LightEncoderConfig& config) : config_(config) {
  config_.validate();
  const int d = config_.d_model;
  embed_ = register_module(
      "embed", nn::Linear(config_.latent_channels * config_.patch * config_.patch, d));
  blocks_ = register_module("blocks", nn::ModuleList());
  out_proj_ = register_module("out_proj", nn::ModuleList());
  merges_ = register_module("merges", nn::ModuleList());
  torch::NoGradGuard guard;
  for (int l = 0; l < config_.n_layers; ++l) {
    blocks_->push_back(LightBlock(d, config_.n_heads, config_.mlp_ratio));
    nn::Linear proj(d, d);
    proj->weight.zero_();
    proj->bias.zero_();
    out_proj_->push_back(proj);
    nn::Linear merge(d, d);
    merge->weight.copy_(torch::eye(d));
    merge->bias.zero_();
    merges_->push_back(merge);
  }
}

LightConditionSequence LightEncoderImpl::encode(const torch::Tensor& canvas_latents) {
  if (canvas_latents.dim() != 5 || canvas_latents.size(2) != config_.latent_channels) {
    throw InvalidArgument("canvas latents must be (B, F, " +
                          std::to_string(config_.latent_channels) + ", h, w)");
  }
  const TokenGrid grid = token_grid(canvas_latents, config_.patch);
  auto h = embed_->forward(patchify(canvas_latents, config_.patch));
  if (config_.positional_encoding) {
    h = h + positional_encoding(grid, config_.d_model).to(h.dtype()).unsqueeze(0);
  }
  LightConditionSequence out;
  out.per_layer.reserve(static_cast<std::size_t>(config_.n_layers));
  for (int l = 0; l < config_.n_layers; ++l) {
    h = blocks_[l]->as<LightBlockImpl>()->forward(h);
    out.per_layer.push_back(out_proj_[l]->as<nn::LinearImpl>()->forward(h));
  }
  return out;
}

torch::Tensor LightEncoderImpl::merge(int layer, const torch::Tensor& h, const torch::Tensor& c,
                                      double scale) const {
  if (layer < 0 || layer >= config_.n_layers) throw InvalidArgument("merge layer out of range");
  if (h.sizes() != c.sizes()) {
    throw InvalidArgument("merge needs hidden and condition of equal shape");
  }
  return merges_[layer]->as<nn::LinearImpl>()->forward(h + scale * c);
}

LightEncoder make_light_encoder(const LightEncoderConfig& config, std::uint64_t seed) {
  torch::manual_seed(seed);
  return LightEncoder(config);
}

LightInjector::LightInjector(const LightEncoderImpl& encoder, LightConditionSequence conditions,
                             double scale)
    : encoder_(encoder), conditions_(std::move(conditions)), scale_(scale) {
  if (static_cast<int>(conditions_.size()) != encoder.config().n_layers) {
    throw InvalidArgument("condition count differs from encoder layer count");
  }
}

torch::Tensor LightInjector::apply(int layer, const torch::Tensor& hidden) const {
  auto c = conditions_.per_layer.at(static_cast<std::size_t>(layer));
  if (c.size(0) == 1 && hidden.size(0) > 1) c = c.expand_as(hidden);
  return encoder_.merge(layer, hidden, c, scale_);
}

void save_light_encoder(const LightEncoder& encoder, const std::filesystem::path& path,
                        const nlohmann::json& meta) {
  save_checkpoint(path, "light_encoder", encoder->config().to_json(), meta, module_state(*encoder));
}

LightEncoder load_light_encoder(const std::filesystem::path& path) {
  const Checkpoint ckpt = load_checkpoint(path);
  if (ckpt.kind() != "light_encoder") throw IntegrityError("expected a light encoder checkpoint", path);
  LightEncoder encoder(LightEncoderConfig::from_json(ckpt.config()));
  load_module_state(*encoder, ckpt.tensors, path);
  encoder->eval();
  return encoder;
}

}  // namespace lumiforge
