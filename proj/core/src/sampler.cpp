// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "lumiforge/sampler.hpp"

#include <cmath>
#include <optional>

#include "lumiforge/error.hpp"
#include "lumiforge/rng.hpp"

namespace lumiforge {

void SampleConfig::validate(int t_train) const {
  if (t_infer < 1 || t_infer > t_train) {
    throw InvalidArgument("steps must lie in [1, " + std::to_string(t_train) + "]");
  }
  if (!(w >= 0.0)) throw InvalidArgument("guidance w must be non-negative");
  if (!(light_scale >= 0.0 && light_scale <= 1.0)) throw InvalidArgument("light_scale must lie in [0, 1]");
  if (n_frames < 1 || resolution < 16) throw InvalidArgument("invalid video shape");
}

nlohmann::json SampleConfig::to_json() const {
  return {{"t_infer", t_infer}, {"w", w},         {"light_scale", light_scale},
          {"seed", seed},       {"n_frames", n_frames}, {"resolution", resolution}};
}

torch::Tensor cfg_combine(const torch::Tensor& eps_cond, const torch::Tensor& eps_uncond, double w) {
  if (!eps_cond.sizes().equals(eps_uncond.sizes())) {
    throw InvalidArgument("guidance inputs differ in shape");
  }
  if (w == 1.0) return eps_cond;
  if (w == 0.0) return eps_uncond;
  return eps_uncond + w * (eps_cond - eps_uncond);
}

std::vector<int> ddim_timesteps(int t_train, int t_infer) {
  if (t_infer < 1 || t_infer > t_train) throw InvalidArgument("t_infer must lie in [1, t_train]");
  std::vector<int> steps;
  steps.reserve(static_cast<std::size_t>(t_infer));
  for (int k = 0; k < t_infer; ++k) {
    steps.push_back(static_cast<int>(static_cast<std::int64_t>(k) * t_train / t_infer) + 1);
  }
  return steps;
}

torch::Tensor sample_latent_from(SamplerModels& models, const torch::Tensor& text,
                                 const torch::Tensor& canvas_latents, const SampleConfig& config,
                                 torch::Tensor z) {
  auto& dit = models.backbone;
  if (!dit) throw InvalidArgument("sampler needs a backbone");
  const DiTConfig& dc = dit->config();
  config.validate(dc.schedule.t_train);
  torch::NoGradGuard guard;
  const Schedule schedule(dc.schedule);

  std::optional<LightInjector> injector;
  if (models.light) {
    models.light->config().check_pairing(dc);
    if (!canvas_latents.defined() || canvas_latents.size(1) != z.size(1)) {
      throw InvalidArgument("canvas sequence length must equal the number of frames");
    }
    injector.emplace(*models.light, models.light->encode(canvas_latents), config.light_scale);
  }
  const LayerInjector* inj = injector ? &*injector : nullptr;
  const auto null_text = dit->null_batch(z.size(0)).contiguous();
  const auto steps = ddim_timesteps(dc.schedule.t_train, config.t_infer);

  for (int k = static_cast<int>(steps.size()) - 1; k >= 0; --k) {
    const int t = steps[static_cast<std::size_t>(k)];
    const int t_prev = k > 0 ? steps[static_cast<std::size_t>(k) - 1] : 0;
    auto t_batch = torch::full({z.size(0)}, t, torch::kLong);
    torch::Tensor eps;
    if (config.w == 0.0) {
      eps = dit->forward(z, t_batch, null_text, inj);
    } else if (config.w == 1.0) {
      eps = dit->forward(z, t_batch, text, inj);
    } else {
      eps = cfg_combine(dit->forward(z, t_batch, text, inj), dit->forward(z, t_batch, null_text, inj),
                        config.w);
    }
    const double ab = schedule.alpha_bar(t);
    const double ab_prev = schedule.alpha_bar(t_prev);
    auto x0 = (z - std::sqrt(1.0 - ab) * eps) / std::sqrt(ab);
    z = std::sqrt(ab_prev) * x0 + std::sqrt(1.0 - ab_prev) * eps;
  }
  return z;
}

torch::Tensor sample_latent(SamplerModels& models, const torch::Tensor& text,
                            const torch::Tensor& canvas_latents, const SampleConfig& config,
                            const std::vector<std::int64_t>& latent_shape) {
  auto gen = at::make_generator<at::CPUGeneratorImpl>(mix_seed(config.seed, 0x5A3B1E));
  std::vector<std::int64_t> shape{1};
  shape.insert(shape.end(), latent_shape.begin(), latent_shape.end());
  auto z = torch::randn(shape, gen, torch::kFloat32);
  return sample_latent_from(models, text, canvas_latents, config, z);
}

torch::Tensor sample_video(SamplerModels& models, const LatentCodec& codec, const torch::Tensor& text,
                           const torch::Tensor& canvases_nhwc, const SampleConfig& config) {
  torch::NoGradGuard guard;
  const CodecConfig& cc = codec->config();
  if (config.resolution % cc.downsample != 0) {
    throw InvalidArgument("resolution not divisible by the codec factor");
  }
  torch::Tensor canvas_latents;
  if (models.light) {
    if (!canvases_nhwc.defined() || canvases_nhwc.size(0) != config.n_frames) {
      throw InvalidArgument("need one canvas per frame");
    }
    canvas_latents = codec->encode(canvases_nhwc).data.unsqueeze(0);
  }
  const std::int64_t side = config.resolution / cc.downsample;
  auto z = sample_latent(models, text, canvas_latents, config,
                         {config.n_frames, cc.latent_channels, side, side});
  return codec->decode({z.squeeze(0), cc.downsample, cc.latent_channels});
}

}  // namespace lumiforge
