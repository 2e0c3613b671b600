// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "lumiforge/run_config.hpp"

#include <cstdlib>
#include <fstream>

#include "lumiforge/error.hpp"
#include "lumiforge/rng.hpp"

namespace lumiforge {

namespace fs = std::filesystem;
using nlohmann::json;

const json& run_config_schema() {
  static const json schema = json::parse(R"({
    "schema_version": "integer",
    "seed": "integer",
    "workdir": "string",
    "dataset": {
      "subjects": ["integer"],
      "trajectories": ["string"],
      "frames_per_video": "integer",
      "resolution": "integer",
      "fps": "number",
      "caption_variants": "integer",
      "caption_augmentation": "boolean",
      "out_dir": "string"
    },
    "codec": {
      "f": "integer", "c_lat": "integer", "kl_weight": "number", "base_channels": "integer",
      "text_dim": "integer", "steps": "integer", "batch": "integer", "lr": "number",
      "checkpoint": "string", "log": "string"
    },
    "backbone": {
      "n_layers": "integer", "d_model": "integer", "n_heads": "integer", "patch": "integer",
      "mlp_ratio": "integer", "n_text_tokens": "integer", "positional_encoding": "boolean",
      "schedule": {"t_train": "integer", "beta_min": "number", "beta_max": "number"},
      "steps": "integer", "batch": "integer", "lr": "number", "text_dropout": "number",
      "augment_copies": "integer", "checkpoint": "string", "log": "string"
    },
    "train": {
      "beta": "number", "lr": "number", "steps": "integer", "batch": "integer",
      "z0_mode": "string", "enable_dis_loss": "boolean", "enable_caption_aug": "boolean",
      "light_scale": "number", "checkpoint": "string", "log": "string"
    },
    "sample": {"t_infer": "integer", "w": "number", "light_scale": "number", "seed": "integer"},
    "sweep": {
      "light_scales": ["number"],
      "ablations": [{"name": "string", "checkpoint": "string"}],
      "heldout_pairs": "integer",
      "out_dir": "string"
    }
  })");
  return schema;
}

namespace {

bool type_matches(const json& value, const std::string& type) {
  if (type == "integer") return value.is_number_integer();
  if (type == "number") return value.is_number();
  if (type == "boolean") return value.is_boolean();
  if (type == "string") return value.is_string();
  return false;
}

void validate(const json& value, const json& schema, const std::string& path) {
  if (schema.is_string()) {
    const auto type = schema.get<std::string>();
    if (!type_matches(value, type)) throw ConfigError("expected " + type, path.empty() ? "/" : path);
    return;
  }
  if (schema.is_array()) {
    if (!value.is_array()) throw ConfigError("expected an array", path);
    for (std::size_t i = 0; i < value.size(); ++i) {
      validate(value[i], schema.front(), path + "/" + std::to_string(i));
    }
    return;
  }
  if (!value.is_object()) throw ConfigError("expected an object", path.empty() ? "/" : path);
  for (const auto& [key, item] : value.items()) {
    auto it = schema.find(key);
    if (it == schema.end()) throw ConfigError("unknown key", path + "/" + key);
    validate(item, *it, path + "/" + key);
  }
}

fs::path resolve(const fs::path& base, const fs::path& p) {
  return p.is_absolute() ? p.lexically_normal() : (base / p).lexically_normal();
}

template <typename T>
T get_or(const json& section, const char* key, T fallback) {
  return section.contains(key) ? section.at(key).get<T>() : fallback;
}

// Wraps library validation errors with the section they came from.
template <typename Fn>
void checked(const std::string& path, Fn&& fn) {
  try {
    fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what(), path);
  }
}

}  // namespace

RunConfig parse_run_config(const json& input, const fs::path& base_dir,
                           std::optional<std::uint64_t> seed_override) {
  validate(input, run_config_schema(), "");
  if (!input.contains("schema_version")) throw ConfigError("missing key", "/schema_version");
  if (input.at("schema_version").get<int>() != kSchemaVersion) {
    throw ConfigError("unsupported schema version (expected " + std::to_string(kSchemaVersion) + ")",
                      "/schema_version");
  }
  json doc = input;
  if (seed_override) doc["seed"] = *seed_override;

  RunConfig rc;
  rc.seed = get_or<std::uint64_t>(doc, "seed", 0);
  rc.workdir = resolve(base_dir, get_or<std::string>(doc, "workdir", "."));
  const fs::path& wd = rc.workdir;
  const json empty = json::object();

  const json& ds = doc.contains("dataset") ? doc.at("dataset") : empty;
  rc.dataset.subjects = get_or<std::vector<int>>(ds, "subjects", {0, 1});
  for (const auto& t : get_or<std::vector<std::string>>(ds, "trajectories", {})) {
    rc.dataset.trajectories.push_back(resolve(base_dir, t));
  }
  rc.dataset.frames_per_video = get_or(ds, "frames_per_video", 16);
  rc.dataset.resolution = get_or(ds, "resolution", 64);
  rc.dataset.fps = get_or(ds, "fps", 8.0);
  rc.dataset.caption_variants = get_or(ds, "caption_variants", 8);
  rc.dataset.caption_augmentation = get_or(ds, "caption_augmentation", true);
  rc.dataset.out_dir = resolve(wd, get_or<std::string>(ds, "out_dir", "dataset"));
  rc.dataset.seed = rc.seed;
  if (rc.dataset.frames_per_video < 1) throw ConfigError("must be >= 1", "/dataset/frames_per_video");
  if (rc.dataset.resolution < 16) throw ConfigError("must be >= 16", "/dataset/resolution");
  if (rc.dataset.caption_variants < 1) throw ConfigError("must be >= 1", "/dataset/caption_variants");

  const json& cs = doc.contains("codec") ? doc.at("codec") : empty;
  checked("/codec", [&] {
    json cfg = json::object();
    for (const char* k : {"f", "c_lat", "kl_weight", "base_channels", "text_dim"}) {
      if (cs.contains(k)) cfg[k] = cs.at(k);
    }
    rc.codec = CodecConfig::from_json(cfg);
  });
  if (rc.dataset.resolution % rc.codec.downsample != 0) {
    throw ConfigError("resolution not divisible by the codec factor", "/codec/f");
  }
  rc.codec_train.steps = get_or(cs, "steps", 2000);
  rc.codec_train.batch = get_or(cs, "batch", 8);
  rc.codec_train.lr = get_or(cs, "lr", 1e-3);
  rc.codec_train.seed = mix_seed(rc.seed, 1);
  rc.codec_checkpoint = resolve(wd, get_or<std::string>(cs, "checkpoint", "codec.lfck"));
  rc.codec_log = resolve(wd, get_or<std::string>(cs, "log", "codec_loss.csv"));

  const json& bs = doc.contains("backbone") ? doc.at("backbone") : empty;
  checked("/backbone", [&] {
    json cfg = json::object();
    for (const char* k : {"n_layers", "d_model", "n_heads", "patch", "mlp_ratio", "n_text_tokens",
                          "positional_encoding", "schedule"}) {
      if (bs.contains(k)) cfg[k] = bs.at(k);
    }
    cfg["latent_channels"] = rc.codec.latent_channels;
    cfg["text_dim"] = rc.codec.text_dim;
    rc.dit = DiTConfig::from_json(cfg);
    Schedule check(rc.dit.schedule);
  });
  const int latent_side = rc.dataset.resolution / rc.codec.downsample;
  if (latent_side % rc.dit.patch != 0) {
    throw ConfigError("latent size not divisible by patch", "/backbone/patch");
  }
  rc.backbone_train.steps = get_or(bs, "steps", 2000);
  rc.backbone_train.batch = get_or(bs, "batch", 2);
  rc.backbone_train.lr = get_or(bs, "lr", 2e-4);
  rc.backbone_train.text_dropout = get_or(bs, "text_dropout", 0.1);
  rc.backbone_train.augment_copies = get_or(bs, "augment_copies", 2);
  rc.backbone_train.seed = mix_seed(rc.seed, 2);
  rc.backbone_checkpoint = resolve(wd, get_or<std::string>(bs, "checkpoint", "backbone.lfck"));
  rc.backbone_log = resolve(wd, get_or<std::string>(bs, "log", "backbone_loss.csv"));

  const json& ts = doc.contains("train") ? doc.at("train") : empty;
  rc.train.beta = get_or(ts, "beta", 3.0);
  rc.train.lr = get_or(ts, "lr", 1e-4);
  rc.train.steps = get_or(ts, "steps", 1500);
  rc.train.batch = get_or(ts, "batch", 2);
  rc.train.enable_dis_loss = get_or(ts, "enable_dis_loss", true);
  rc.train.enable_caption_aug = get_or(ts, "enable_caption_aug", true);
  rc.train.light_scale = get_or(ts, "light_scale", kDefaultLightScale);
  rc.train.seed = mix_seed(rc.seed, 3);
  checked("/train/z0_mode", [&] {
    rc.train.z0_mode = z0_mode_from_string(get_or<std::string>(ts, "z0_mode", "paper"));
  });
  checked("/train", [&] { rc.train.validate(); });
  rc.light_checkpoint = resolve(wd, get_or<std::string>(ts, "checkpoint", "light.lfck"));
  rc.train_log = resolve(wd, get_or<std::string>(ts, "log", "train_loss.csv"));

  const json& ss = doc.contains("sample") ? doc.at("sample") : empty;
  rc.sample.t_infer = get_or(ss, "t_infer", 50);
  rc.sample.w = get_or(ss, "w", 7.5);
  rc.sample.light_scale = get_or(ss, "light_scale", kDefaultLightScale);
  rc.sample.seed = get_or<std::uint64_t>(ss, "seed", rc.seed);
  rc.sample.n_frames = rc.dataset.frames_per_video;
  rc.sample.resolution = rc.dataset.resolution;
  checked("/sample", [&] { rc.sample.validate(rc.dit.schedule.t_train); });

  const json& sw = doc.contains("sweep") ? doc.at("sweep") : empty;
  if (sw.contains("light_scales")) rc.sweep.light_scales = sw.at("light_scales").get<std::vector<double>>();
  if (rc.sweep.light_scales.empty()) throw ConfigError("sweep needs at least one scale", "/sweep/light_scales");
  for (std::size_t i = 0; i < rc.sweep.light_scales.size(); ++i) {
    const double s = rc.sweep.light_scales[i];
    if (!(s >= 0.0 && s <= 1.0)) throw ConfigError("must lie in [0, 1]", "/sweep/light_scales/" + std::to_string(i));
  }
  if (sw.contains("ablations")) {
    const json& list = sw.at("ablations");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string at = "/sweep/ablations/" + std::to_string(i);
      if (!list[i].contains("name")) throw ConfigError("missing key", at + "/name");
      if (!list[i].contains("checkpoint")) throw ConfigError("missing key", at + "/checkpoint");
      rc.sweep.ablations.push_back({list[i].at("name").get<std::string>(),
                                    resolve(wd, list[i].at("checkpoint").get<std::string>())});
    }
  }
  rc.sweep.heldout_pairs = get_or(sw, "heldout_pairs", 20);
  if (rc.sweep.heldout_pairs < 1) throw ConfigError("must be >= 1", "/sweep/heldout_pairs");
  rc.sweep.out_dir = resolve(wd, get_or<std::string>(sw, "out_dir", "sweep"));

  rc.document = doc;
  return rc;
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw NotFound("config file not found: " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("not valid JSON: ") + e.what(), "/");
  }
  std::optional<std::uint64_t> seed;
  if (const char* env = std::getenv("LUMIFORGE_SEED"); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      seed = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw ConfigError("LUMIFORGE_SEED is not an unsigned integer", "/seed");
    }
  }
  return parse_run_config(doc, fs::absolute(path).parent_path(), seed);
}

}  // namespace lumiforge
