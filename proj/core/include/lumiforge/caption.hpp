// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lumiforge/scene_renderer.hpp"

namespace lumiforge {

struct Caption {
  std::string text;
  int template_id = 0;
  std::map<std::string, std::string> slots;

  nlohmann::json to_json() const;
  static Caption from_json(const nlohmann::json& doc);
};

/// Templates use {slot} placeholders. The subject slot is derived from the
/// scene; adjective, background surface and context are drawn per seed.
class CaptionBank {
 public:
  CaptionBank(std::vector<std::string> templates, std::vector<std::string> adjectives,
              std::vector<std::string> surfaces, std::vector<std::string> colors,
              std::vector<std::string> contexts);

  /// The built-in vocabulary.
  static const CaptionBank& standard();

  std::size_t template_count() const { return templates_.size(); }

  /// Fills template_id with slots. Unknown placeholders throw.
  std::string render(int template_id, const std::map<std::string, std::string>& slots) const;

  Caption generate(const SubjectScene& scene, std::uint64_t seed) const;

  /// Paraphrases that redraw template, background and context while the
  /// subject slot stays fixed.
  std::vector<Caption> augment(const Caption& caption, int n_variants, std::uint64_t seed) const;

 private:
  std::vector<std::string> templates_;
  std::vector<std::string> adjectives_;
  std::vector<std::string> surfaces_;
  std::vector<std::string> colors_;
  std::vector<std::string> contexts_;
};

/// Subject descriptor derived from skin tone and head proportions.
std::string describe_subject(const SubjectScene& scene);

/// Nearest named color of an RGB albedo.
std::string color_name(const Vec3& rgb);

Caption generate_caption(const SubjectScene& scene, std::uint64_t seed);
std::vector<Caption> augment_caption(const Caption& caption, int n_variants, std::uint64_t seed);

}  // namespace lumiforge
