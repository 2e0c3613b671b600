// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "lumiforge/schedule.hpp"

#include <cmath>

#include "lumiforge/error.hpp"

namespace lumiforge {

nlohmann::json ScheduleConfig::to_json() const {
  return {{"t_train", t_train}, {"beta_min", beta_min}, {"beta_max", beta_max}};
}

ScheduleConfig ScheduleConfig::from_json(const nlohmann::json& doc) {
  ScheduleConfig c;
  c.t_train = doc.value("t_train", c.t_train);
  c.beta_min = doc.value("beta_min", c.beta_min);
  c.beta_max = doc.value("beta_max", c.beta_max);
  return c;
}

Schedule::Schedule(const ScheduleConfig& config) : config_(config) {
  if (config_.t_train < 1) throw InvalidArgument("schedule needs at least one step");
  if (!(config_.beta_min > 0.0) || !(config_.beta_max < 1.0) ||
      config_.beta_min > config_.beta_max) {
    throw InvalidArgument("schedule betas must satisfy 0 < beta_min <= beta_max < 1");
  }
  const int T = config_.t_train;
  betas_.resize(static_cast<std::size_t>(T));
  alpha_bars_.resize(static_cast<std::size_t>(T) + 1);
  alpha_bars_[0] = 1.0;
  for (int t = 1; t <= T; ++t) {
    const double s = T == 1 ? 0.0 : static_cast<double>(t - 1) / (T - 1);
    betas_[t - 1] = config_.beta_min + s * (config_.beta_max - config_.beta_min);
    alpha_bars_[t] = alpha_bars_[t - 1] * (1.0 - betas_[t - 1]);
  }
  alpha_bar_table_ = torch::tensor(alpha_bars_, torch::kFloat64).to(torch::kFloat32);
}

void Schedule::check(int t) const {
  if (t < 0 || t > config_.t_train) {
    throw InvalidArgument("diffusion step " + std::to_string(t) + " outside [0, " +
                          std::to_string(config_.t_train) + "]");
  }
}

double Schedule::beta(int t) const {
  check(t);
  if (t == 0) throw InvalidArgument("beta is undefined at step 0");
  return betas_[static_cast<std::size_t>(t) - 1];
}

double Schedule::alpha(int t) const { return 1.0 - beta(t); }

double Schedule::alpha_bar(int t) const {
  check(t);
  return alpha_bars_[static_cast<std::size_t>(t)];
}

torch::Tensor Schedule::alpha_bar(const torch::Tensor& t) const {
  if (t.numel() > 0) {
    const auto lo = t.min().item<std::int64_t>();
    const auto hi = t.max().item<std::int64_t>();
    if (lo < 0 || hi > config_.t_train) {
      throw InvalidArgument("diffusion step outside [0, " + std::to_string(config_.t_train) + "]");
    }
  }
  return alpha_bar_table_.index_select(0, t.to(torch::kLong).flatten());
}

torch::Tensor q_sample(const torch::Tensor& z0, const torch::Tensor& t, const torch::Tensor& eps,
                       const Schedule& schedule) {
  if (!z0.sizes().equals(eps.sizes())) throw InvalidArgument("eps must match z0 in shape");
  if (t.numel() > 0 && t.min().item<std::int64_t>() < 1) {
    throw InvalidArgument("q_sample requires t >= 1");
  }
  // Coefficients in float64: 1 - alpha_bar near t = 1 loses digits in float32.
  auto ab = schedule.alpha_bar(t).to(torch::kFloat64);
  std::vector<std::int64_t> shape(static_cast<std::size_t>(z0.dim()), 1);
  if (ab.numel() != 1) {
    if (ab.numel() != z0.size(0)) throw InvalidArgument("one step per batch element required");
    shape[0] = ab.numel();
  }
  ab = ab.reshape(shape);
  return ab.sqrt().to(z0.dtype()) * z0 + (1.0 - ab).sqrt().to(z0.dtype()) * eps;
}

torch::Tensor q_sample(const torch::Tensor& z0, int t, const torch::Tensor& eps,
                       const Schedule& schedule) {
  if (t < 1 || t > schedule.steps()) {
    throw InvalidArgument("q_sample step " + std::to_string(t) + " outside [1, " +
                          std::to_string(schedule.steps()) + "]");
  }
  if (!z0.sizes().equals(eps.sizes())) throw InvalidArgument("eps must match z0 in shape");
  const double ab = schedule.alpha_bar(t);
  return std::sqrt(ab) * z0 + std::sqrt(1.0 - ab) * eps;
}

}  // namespace lumiforge
