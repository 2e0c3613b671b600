// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include <nlohmann/json.hpp>
#include <torch/torch.h>

namespace lumiforge {

struct ScheduleConfig {
  int t_train = 1000;
  double beta_min = 1e-4;
  double beta_max = 2e-2;

  nlohmann::json to_json() const;
  static ScheduleConfig from_json(const nlohmann::json& doc);
};

/// Linear-beta DDPM schedule. Steps are 1-based: t in [1, t_train], and
/// alpha_bar(0) == 1 by convention.
class Schedule {
 public:
  explicit Schedule(const ScheduleConfig& config = {});

  int steps() const { return config_.t_train; }
  const ScheduleConfig& config() const { return config_; }
  double beta(int t) const;
  double alpha(int t) const;
  double alpha_bar(int t) const;

  /// alpha_bar gathered for a (B,) tensor of steps, as float32.
  torch::Tensor alpha_bar(const torch::Tensor& t) const;

 private:
  void check(int t) const;

  ScheduleConfig config_;
  std::vector<double> betas_;
  std::vector<double> alpha_bars_;  // index 0 holds alpha_bar(0) == 1
  torch::Tensor alpha_bar_table_;
};

/// z_t = sqrt(alpha_bar_t) z0 + sqrt(1 - alpha_bar_t) eps, with t given per
/// batch element (leading dimension) or as a scalar step.
torch::Tensor q_sample(const torch::Tensor& z0, const torch::Tensor& t, const torch::Tensor& eps,
                       const Schedule& schedule);
torch::Tensor q_sample(const torch::Tensor& z0, int t, const torch::Tensor& eps,
                       const Schedule& schedule);

}  // namespace lumiforge
