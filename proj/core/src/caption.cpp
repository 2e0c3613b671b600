// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "lumiforge/caption.hpp"

#include <array>
#include <limits>

#include "lumiforge/error.hpp"
#include "lumiforge/rng.hpp"

namespace lumiforge {

nlohmann::json Caption::to_json() const {
  return {{"text", text}, {"template_id", template_id}, {"slots", slots}};
}

Caption Caption::from_json(const nlohmann::json& doc) {
  Caption c;
  c.text = doc.at("text").get<std::string>();
  c.template_id = doc.at("template_id").get<int>();
  c.slots = doc.at("slots").get<std::map<std::string, std::string>>();
  return c;
}

CaptionBank::CaptionBank(std::vector<std::string> templates, std::vector<std::string> adjectives,
                         std::vector<std::string> surfaces, std::vector<std::string> colors,
                         std::vector<std::string> contexts)
    : templates_(std::move(templates)),
      adjectives_(std::move(adjectives)),
      surfaces_(std::move(surfaces)),
      colors_(std::move(colors)),
      contexts_(std::move(contexts)) {
  if (templates_.empty()) throw InvalidArgument("caption template bank is empty");
  if (adjectives_.empty() || surfaces_.empty() || colors_.empty() || contexts_.empty()) {
    throw InvalidArgument("caption vocabulary has an empty slot list");
  }
}

const CaptionBank& CaptionBank::standard() {
  static const CaptionBank bank(
      {"a {adjective} {subject} in front of a {background}",
       "portrait of a {adjective} {subject} against a {background}, {context}",
       "a {subject} looking {adjective}, with a {background} behind, {context}",
       "close-up of a {adjective} {subject} before a {background}",
       "a {adjective} {subject} posing in front of a {background}, {context}",
       "{context}: a {adjective} {subject} and a {background}"},
      {"calm", "serious", "smiling", "thoughtful", "relaxed", "focused", "cheerful", "quiet"},
      {"wall", "backdrop", "studio backdrop", "plain wall", "curtain"},
      {"gray", "white", "red", "orange", "yellow", "green", "teal", "blue", "purple", "pink",
       "brown", "beige"},
      {"studio portrait", "soft focus", "head and shoulders framing", "neutral pose",
       "indoor scene", "still camera", "photographic style", "centered composition"});
  return bank;
}

std::string CaptionBank::render(int template_id, const std::map<std::string, std::string>& slots) const {
  if (template_id < 0 || static_cast<std::size_t>(template_id) >= templates_.size()) {
    throw InvalidArgument("caption template id out of range");
  }
  const std::string& tpl = templates_[static_cast<std::size_t>(template_id)];
  std::string out;
  std::size_t pos = 0;
  while (pos < tpl.size()) {
    const auto open = tpl.find('{', pos);
    if (open == std::string::npos) {
      out.append(tpl, pos, std::string::npos);
      break;
    }
    const auto close = tpl.find('}', open);
    out.append(tpl, pos, open - pos);
    const std::string name = tpl.substr(open + 1, close - open - 1);
    auto it = slots.find(name);
    if (it == slots.end()) throw InvalidArgument("caption slot '" + name + "' has no value");
    out += it->second;
    pos = close + 1;
  }
  return out;
}

namespace {

template <typename T>
const T& pick(const std::vector<T>& items, Rng& rng) {
  return items[rng.below(items.size())];
}

}  // namespace

Caption CaptionBank::generate(const SubjectScene& scene, std::uint64_t seed) const {
  Rng rng(mix_seed(seed, static_cast<std::uint64_t>(scene.subject_id)));
  Caption c;
  c.template_id = static_cast<int>(rng.below(templates_.size()));
  c.slots["subject"] = describe_subject(scene);
  c.slots["adjective"] = pick(adjectives_, rng);
  c.slots["background"] = color_name(scene.background_albedo) + " " + pick(surfaces_, rng);
  c.slots["context"] = pick(contexts_, rng);
  c.text = render(c.template_id, c.slots);
  return c;
}

std::vector<Caption> CaptionBank::augment(const Caption& caption, int n_variants,
                                          std::uint64_t seed) const {
  if (n_variants < 1) throw InvalidArgument("n_variants must be at least 1");
  Rng rng(mix_seed(seed, 0xA06));
  std::vector<Caption> out;
  out.reserve(static_cast<std::size_t>(n_variants));
  for (int v = 0; v < n_variants; ++v) {
    Caption c;
    c.template_id = static_cast<int>(rng.below(templates_.size()));
    c.slots = caption.slots;
    c.slots["background"] = pick(colors_, rng) + " " + pick(surfaces_, rng);
    c.slots["context"] = pick(contexts_, rng);
    if (rng.uniform() < 0.5) c.slots["adjective"] = pick(adjectives_, rng);
    c.text = render(c.template_id, c.slots);
    out.push_back(std::move(c));
  }
  return out;
}

std::string describe_subject(const SubjectScene& scene) {
  const Vec3& a = scene.albedo_skin;
  const double lum = 0.2126 * a.x() + 0.7152 * a.y() + 0.0722 * a.z();
  std::string tone = lum > 0.55 ? "fair-skinned" : lum > 0.35 ? "olive-skinned" : "dark-skinned";
  const Vec3& ax = scene.head.semi_axes;
  const double aspect = ax.z() / ax.x();
  std::string face = aspect > 1.4 ? "long" : aspect < 1.25 ? "round" : "oval";
  return tone + " person with a " + face + " face";
}

std::string color_name(const Vec3& rgb) {
  struct Named {
    const char* name;
    double r, g, b;
  };
  static constexpr std::array<Named, 12> kColors{{{"gray", 0.5, 0.5, 0.5},
                                                  {"white", 0.78, 0.78, 0.78},
                                                  {"red", 0.75, 0.25, 0.25},
                                                  {"orange", 0.78, 0.5, 0.22},
                                                  {"yellow", 0.75, 0.72, 0.25},
                                                  {"green", 0.3, 0.68, 0.3},
                                                  {"teal", 0.25, 0.6, 0.6},
                                                  {"blue", 0.27, 0.35, 0.75},
                                                  {"purple", 0.55, 0.3, 0.7},
                                                  {"pink", 0.78, 0.45, 0.6},
                                                  {"brown", 0.5, 0.35, 0.25},
                                                  {"beige", 0.7, 0.62, 0.48}}};
  const char* best = kColors[0].name;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto& c : kColors) {
    const double d = (rgb - Vec3(c.r, c.g, c.b)).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = c.name;
    }
  }
  return best;
}

Caption generate_caption(const SubjectScene& scene, std::uint64_t seed) {
  return CaptionBank::standard().generate(scene, seed);
}

std::vector<Caption> augment_caption(const Caption& caption, int n_variants, std::uint64_t seed) {
  return CaptionBank::standard().augment(caption, n_variants, seed);
}

}  // namespace lumiforge
