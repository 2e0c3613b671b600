// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "lumiforge/video_dit.hpp"

#include "lumiforge/checkpoint.hpp"
#include "lumiforge/error.hpp"

namespace lumiforge {

namespace nn = torch::nn;

void DiTConfig::validate() const {
  if (n_layers < 1) throw InvalidArgument("DiT needs at least one layer");
  if (d_model < 1 || n_heads < 1 || d_model % n_heads != 0) {
    throw InvalidArgument("d_model must be a positive multiple of n_heads");
  }
  if (patch < 1 || mlp_ratio < 1 || latent_channels < 1 || text_dim < 1 || n_text_tokens < 1) {
    throw InvalidArgument("DiT sizes must be positive");
  }
}

nlohmann::json DiTConfig::to_json() const {
  return {{"n_layers", n_layers},
          {"d_model", d_model},
          {"n_heads", n_heads},
          {"patch", patch},
          {"mlp_ratio", mlp_ratio},
          {"latent_channels", latent_channels},
          {"text_dim", text_dim},
          {"n_text_tokens", n_text_tokens},
          {"positional_encoding", positional_encoding},
          {"schedule", schedule.to_json()}};
}

DiTConfig DiTConfig::from_json(const nlohmann::json& doc) {
  DiTConfig c;
  c.n_layers = doc.value("n_layers", c.n_layers);
  c.d_model = doc.value("d_model", c.d_model);
  c.n_heads = doc.value("n_heads", c.n_heads);
  c.patch = doc.value("patch", c.patch);
  c.mlp_ratio = doc.value("mlp_ratio", c.mlp_ratio);
  c.latent_channels = doc.value("latent_channels", c.latent_channels);
  c.text_dim = doc.value("text_dim", c.text_dim);
  c.n_text_tokens = doc.value("n_text_tokens", c.n_text_tokens);
  c.positional_encoding = doc.value("positional_encoding", c.positional_encoding);
  if (doc.contains("schedule")) c.schedule = ScheduleConfig::from_json(doc.at("schedule"));
  c.validate();
  return c;
}

namespace {

nn::LayerNorm plain_norm(int d) {
  return nn::LayerNorm(nn::LayerNormOptions({d}).elementwise_affine(false).eps(1e-6));
}

void zero_linear(nn::Linear& layer) {
  torch::NoGradGuard guard;
  layer->weight.zero_();
  if (layer->bias.defined()) layer->bias.zero_();
}

}  // namespace

DiTBlockImpl::DiTBlockImpl(const DiTConfig& config) {
  const int d = config.d_model;
  norm1_ = register_module("norm1", plain_norm(d));
  norm2_ = register_module("norm2", nn::LayerNorm(nn::LayerNormOptions({d}).eps(1e-6)));
  norm3_ = register_module("norm3", plain_norm(d));
  self_attn_ = register_module("self_attn", MultiHeadAttention(d, config.n_heads));
  cross_attn_ = register_module("cross_attn", MultiHeadAttention(d, config.n_heads));
  mlp_ = register_module("mlp", FeedForward(d, config.mlp_ratio));
  ada_ = register_module("ada", nn::Linear(d, 6 * d));
  zero_linear(ada_);
}

torch::Tensor DiTBlockImpl::forward(const torch::Tensor& x, const torch::Tensor& cond,
                                    const torch::Tensor& text_tokens) {
  auto mod = ada_->forward(torch::silu(cond)).chunk(6, 1);
  auto h = x + mod[2].unsqueeze(1) * self_attn_->forward(modulate(norm1_->forward(x), mod[0], mod[1]));
  h = h + cross_attn_->forward(norm2_->forward(h), text_tokens);
  h = h + mod[5].unsqueeze(1) * mlp_->forward(modulate(norm3_->forward(h), mod[3], mod[4]));
  return h;
}

VideoDiTImpl::VideoDiTImpl(const DiTConfig& config) : config_(config) {
  config_.validate();
  const int d = config_.d_model;
  const int p = config_.patch;
  x_embed_ = register_module("x_embed", nn::Linear(config_.latent_channels * p * p, d));
  t_embed_ = register_module("t_embed", nn::Sequential(nn::Linear(d, d), nn::SiLU(), nn::Linear(d, d)));
  text_pool_ = register_module("text_pool", nn::Linear(config_.text_dim, d));
  text_tokens_ = register_module("text_tokens", nn::Linear(config_.text_dim, config_.n_text_tokens * d));
  blocks_ = register_module("blocks", nn::ModuleList());
  for (int l = 0; l < config_.n_layers; ++l) blocks_->push_back(DiTBlock(config_));
  final_norm_ = register_module("final_norm", plain_norm(d));
  final_ada_ = register_module("final_ada", nn::Linear(d, 2 * d));
  out_ = register_module("out", nn::Linear(d, config_.latent_channels * p * p));
  zero_linear(final_ada_);
  zero_linear(out_);
  null_text_ = register_parameter("null_text", torch::zeros({config_.text_dim}));
}

torch::Tensor VideoDiTImpl::forward(const torch::Tensor& z_t, const torch::Tensor& t,
                                    const torch::Tensor& text, const LayerInjector* injector) {
  if (z_t.dim() != 5 || z_t.size(2) != config_.latent_channels) {
    throw InvalidArgument("DiT input must be (B, F, " + std::to_string(config_.latent_channels) +
                          ", h, w)");
  }
  const auto B = z_t.size(0);
  if (t.dim() != 1 || t.size(0) != B) throw InvalidArgument("one timestep per batch element expected");
  if (text.dim() != 2 || text.size(0) != B || text.size(1) != config_.text_dim) {
    throw InvalidArgument("text embedding must be (B, " + std::to_string(config_.text_dim) + ")");
  }
  if (injector != nullptr && injector->layers() != config_.n_layers) {
    throw InvalidArgument("light condition has " + std::to_string(injector->layers()) +
                          " layers, backbone has " + std::to_string(config_.n_layers));
  }
  const int d = config_.d_model;
  const TokenGrid grid = token_grid(z_t, config_.patch);

  auto h = x_embed_->forward(patchify(z_t, config_.patch));
  if (config_.positional_encoding) {
    h = h + positional_encoding(grid, d).to(h.dtype()).unsqueeze(0);
  }
  const auto text_in = text.to(h.dtype());
  auto cond = t_embed_->forward(timestep_embedding(t, d).to(h.dtype())) + text_pool_->forward(text_in);
  auto tokens = text_tokens_->forward(text_in).view({B, config_.n_text_tokens, d});

  for (int l = 0; l < config_.n_layers; ++l) {
    h = blocks_[l]->as<DiTBlockImpl>()->forward(h, cond, tokens);
    if (injector != nullptr) h = injector->apply(l, h);
  }
  auto mod = final_ada_->forward(torch::silu(cond)).chunk(2, 1);
  auto out = out_->forward(modulate(final_norm_->forward(h), mod[0], mod[1]));
  return unpatchify(out, grid, config_.latent_channels, config_.patch);
}

torch::Tensor VideoDiTImpl::text_or_null(const torch::Tensor& text, const torch::Tensor& drop) const {
  auto null = null_text_.to(text.dtype()).unsqueeze(0).expand_as(text);
  return torch::where(drop.to(torch::kBool).unsqueeze(1), null, text);
}

torch::Tensor VideoDiTImpl::null_batch(std::int64_t b) const {
  return null_text_.unsqueeze(0).expand({b, config_.text_dim});
}

VideoDiT make_dit(const DiTConfig& config, std::uint64_t seed) {
  torch::manual_seed(seed);
  return VideoDiT(config);
}

void save_dit(const VideoDiT& dit, const std::filesystem::path& path, const nlohmann::json& meta) {
  save_checkpoint(path, "dit", dit->config().to_json(), meta, module_state(*dit));
}

VideoDiT load_dit(const std::filesystem::path& path) {
  const Checkpoint ckpt = load_checkpoint(path);
  if (ckpt.kind() != "dit") throw IntegrityError("expected a backbone checkpoint", path);
  VideoDiT dit(DiTConfig::from_json(ckpt.config()));
  load_module_state(*dit, ckpt.tensors, path);
  dit->eval();
  return dit;
}

}  // namespace lumiforge
