// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lumiforge/error.hpp"
#include "lumiforge/image_io.hpp"
#include "lumiforge/lighting_repr.hpp"
#include "lumiforge/pipeline.hpp"
#include "lumiforge/tensor_convert.hpp"
#include "lumiforge/text_embedding.hpp"
#include "lumiforge/trajectory_io.hpp"

namespace fs = std::filesystem;
using namespace lumiforge;

namespace {

constexpr int kExitConfig = 2;

void progress(const std::string& line) { std::cerr << line << '\n'; }

void write_json(const fs::path& path, const nlohmann::json& doc) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("cannot write file", path);
}

GridIndex parse_index(const std::vector<int>& v, const char* what) {
  if (v.size() != 3) throw InvalidArgument(std::string(what) + " needs three integers i,j,k");
  return {v[0], v[1], v[2]};
}


}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Procedural portrait-lighting data, light-conditioned video diffusion and its evaluation"};
  app.require_subcommand(1);

  std::string config_path;
  auto* gen = app.add_subcommand("generate-dataset", "Render subjects x trajectories into a dataset");
  gen->add_option("--config", config_path, "Run config")->required()->check(CLI::ExistingFile);

  auto* codec_cmd = app.add_subcommand("train-codec", "Train the shared latent codec");
  codec_cmd->add_option("--config", config_path, "Run config")->required()->check(CLI::ExistingFile);

  auto* backbone_cmd = app.add_subcommand("train-backbone", "Plain text-conditioned denoising warmup");
  backbone_cmd->add_option("--config", config_path, "Run config")->required()->check(CLI::ExistingFile);

  bool no_dis = false, no_aug = false;
  std::string train_ckpt, train_log;
  auto* train_cmd = app.add_subcommand("train", "Dual-branch training of the light encoder");
  train_cmd->add_option("--config", config_path, "Run config")->required()->check(CLI::ExistingFile);
  train_cmd->add_flag("--no-dis-loss", no_dis, "Drop the disentanglement term");
  train_cmd->add_flag("--no-caption-aug", no_aug, "Train with base captions only");
  train_cmd->add_option("--checkpoint", train_ckpt, "Output light encoder checkpoint");
  train_cmd->add_option("--log", train_log, "Output loss CSV");

  std::string caption, trajectory_path, out_dir, light_override;
  std::optional<double> light_scale, w;
  std::optional<int> steps;
  std::optional<std::uint64_t> seed;
  bool strip = false, no_light = false;
  auto* sample_cmd = app.add_subcommand("sample", "Generate a video from a caption and a light path");
  sample_cmd->add_option("--config", config_path, "Run config")->required()->check(CLI::ExistingFile);
  sample_cmd->add_option("--caption", caption, "Text prompt")->required();
  sample_cmd->add_option("--trajectory", trajectory_path, "Trajectory JSON")->required()->check(CLI::ExistingFile);
  sample_cmd->add_option("--light-scale", light_scale, "Light injection scale in [0,1]");
  sample_cmd->add_option("--steps", steps, "Sampling steps");
  sample_cmd->add_option("--w", w, "Text guidance scale");
  sample_cmd->add_option("--seed", seed, "Noise seed");
  sample_cmd->add_option("--out", out_dir, "Output directory")->required();
  sample_cmd->add_option("--light", light_override, "Light encoder checkpoint");
  sample_cmd->add_flag("--no-light", no_light, "Backbone only");
  sample_cmd->add_flag("--strip", strip, "Also write strip.png");

  std::string video_dir, reference_dir, report_path, csv_path, eval_codec;
  std::optional<std::string> eval_caption;
  auto* eval_cmd = app.add_subcommand("evaluate", "Score a generated video against a reference");
  eval_cmd->add_option("--video", video_dir, "Directory of frame_*.png")->required()->check(CLI::ExistingDirectory);
  eval_cmd->add_option("--reference", reference_dir, "Directory of canvas_*.png and/or frame_*.png")
      ->required()
      ->check(CLI::ExistingDirectory);
  eval_cmd->add_option("--out", report_path, "Report JSON")->required();
  eval_cmd->add_option("--csv", csv_path, "Per-frame CSV");
  eval_cmd->add_option("--caption", eval_caption, "Caption for text-video similarity");
  eval_cmd->add_option("--codec", eval_codec, "Codec checkpoint providing the frame side of the text pair")
      ->check(CLI::ExistingFile);

  std::string axis = "light_scale";
  std::vector<double> scales;
  std::string sweep_out;
  auto* sweep_cmd = app.add_subcommand("sweep", "Sample and evaluate across a sweep axis");
  sweep_cmd->add_option("--config", config_path, "Run config")->required()->check(CLI::ExistingFile);
  sweep_cmd->add_option("--axis", axis, "light_scale or ablation")
      ->check(CLI::IsMember({"light_scale", "ablation"}));
  sweep_cmd->add_option("--scales", scales, "Light scales (overrides the config)")->delimiter(',');
  sweep_cmd->add_option("--out", sweep_out, "Output directory (overrides the config)");

  std::string kind = "linear", traj_out;
  std::vector<int> start, end, center;
  std::vector<double> angles{0.0, 3.14159265358979323846};
  double radius = 40.0;
  std::string plane = "ik";
  int frames = 16;
  auto* traj_cmd = app.add_subcommand("trajectory", "Write a trajectory JSON on the default grid");
  traj_cmd->add_option("--kind", kind, "linear or arc")->check(CLI::IsMember({"linear", "arc"}));
  traj_cmd->add_option("--start", start, "Start index i,j,k")->delimiter(',');
  traj_cmd->add_option("--end", end, "End index i,j,k")->delimiter(',');
  traj_cmd->add_option("--center", center, "Arc center i,j,k")->delimiter(',');
  traj_cmd->add_option("--radius", radius, "Arc radius in cm");
  traj_cmd->add_option("--plane", plane, "Arc plane axes, two of i,j,k");
  traj_cmd->add_option("--angles", angles, "Arc start,end angles in radians")->delimiter(',');
  traj_cmd->add_option("--frames", frames, "Number of frames");
  traj_cmd->add_option("--out", traj_out, "Output JSON")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*traj_cmd) {
      const LightGrid grid = default_grid();
      LightTrajectory t;
      if (kind == "linear") {
        t = linear_trajectory(grid, parse_index(start, "--start"), parse_index(end, "--end"), frames);
      } else {
        if (plane.size() != 2) throw InvalidArgument("--plane needs two axis letters");
        auto axis_of = [](char c) {
          if (c == 'i') return 0;
          if (c == 'j') return 1;
          if (c == 'k') return 2;
          throw InvalidArgument("unknown axis letter");
        };
        if (angles.size() != 2) throw InvalidArgument("--angles needs two values");
        t = arc_trajectory(grid, parse_index(center, "--center"), radius,
                           {axis_of(plane[0]), axis_of(plane[1])}, angles[0], angles[1], frames);
      }
      save_trajectory(as_multi(t), traj_out);
      return 0;
    }
    if (*eval_cmd) {
      std::optional<std::pair<FrameEmbedder, TextEmbedder>> joint;
      if (eval_caption && !eval_codec.empty()) {
        const LatentCodec codec = load_codec(eval_codec);
        joint.emplace(codec_frame_embedder(codec), hashed_text_embedder(codec->config().text_dim));
      }
      const MetricsReport r = evaluate_directories(video_dir, reference_dir, eval_caption, joint);
      write_json(report_path, r.to_json());
      if (!csv_path.empty()) {
        std::ofstream csv(csv_path);
        csv << r.per_frame_csv();
        if (!csv) throw IoError("cannot write file", csv_path);
      }
      std::cout << r.to_json().dump(2) << '\n';
      return 0;
    }

    const RunConfig rc = load_run_config(config_path);
    if (*gen) {
      const DatasetManifest m = run_generate_dataset(rc);
      std::cout << (m.root / "manifest.json").string() << '\n';
    } else if (*codec_cmd) {
      run_train_codec(rc, progress);
      std::cout << rc.codec_checkpoint.string() << '\n';
    } else if (*backbone_cmd) {
      run_train_backbone(rc, progress);
      std::cout << rc.backbone_checkpoint.string() << '\n';
    } else if (*train_cmd) {
      TrainOverrides o;
      if (no_dis) o.enable_dis_loss = false;
      if (no_aug) o.enable_caption_aug = false;
      if (!train_ckpt.empty()) o.checkpoint = fs::absolute(train_ckpt);
      if (!train_log.empty()) o.log = fs::absolute(train_log);
      run_train(rc, o, progress);
      std::cout << o.checkpoint.value_or(rc.light_checkpoint).string() << '\n';
    } else if (*sample_cmd) {
      SampleConfig cfg = rc.sample;
      if (light_scale) cfg.light_scale = *light_scale;
      if (w) cfg.w = *w;
      if (steps) cfg.t_infer = *steps;
      if (seed) cfg.seed = *seed;
      const fs::path light_ckpt =
          no_light ? fs::path() : (light_override.empty() ? rc.light_checkpoint : fs::absolute(light_override));
      PipelineModels models = load_pipeline(rc, light_ckpt);
      const MultiLightTrajectory traj = resample(load_trajectory(trajectory_path), cfg.n_frames);
      const auto canvases =
          images_of(render_canvas_sequence(traj, default_canvas_geometry(cfg.resolution, cfg.resolution)));
      const int text_dim = models.diffusion.backbone->config().text_dim;
      auto video = sample_video(models.diffusion, models.codec, text_tensor(caption, text_dim),
                                images_to_tensor(canvases), cfg);
      nlohmann::json meta{{"caption", caption},
                          {"trajectory", trajectory_to_json(traj)},
                          {"sample", cfg.to_json()},
                          {"light_module", !no_light},
                          {"light_checkpoint", light_ckpt.filename().string()},
                          {"fps", rc.dataset.fps}};
      write_sample(out_dir, tensor_to_images(video), canvases, meta, strip);
      std::cout << fs::path(out_dir).string() << '\n';
    } else if (*sweep_cmd) {
      const DatasetManifest manifest = load_manifest(rc.manifest_path());
      const auto pairs = heldout_pairs(manifest, rc.sweep.heldout_pairs, rc.sample.n_frames,
                                       mix_seed(rc.seed, 7));
      const fs::path out = sweep_out.empty() ? rc.sweep.out_dir : fs::absolute(sweep_out);
      SweepTable table;
      if (axis == "light_scale") {
        PipelineModels models = load_pipeline(rc, rc.light_checkpoint);
        const auto list = scales.empty() ? rc.sweep.light_scales : scales;
        if (list.empty()) throw ConfigError("sweep list is empty", "/sweep/light_scales");
        table = light_scale_sweep(models, pairs, list, rc.sample);
      } else {
        if (rc.sweep.ablations.empty()) throw ConfigError("sweep list is empty", "/sweep/ablations");
        for (const auto& variant : rc.sweep.ablations) {
          PipelineModels models = load_pipeline(rc, variant.checkpoint);
          table.rows.push_back(evaluate_pairs(models, pairs, rc.sample, variant.name));
        }
      }
      nlohmann::json doc = table.to_json();
      doc["axis"] = axis;
      doc["pairs"] = rc.sweep.heldout_pairs;
      write_json(out / "sweep.json", doc);
      std::ofstream txt(out / "sweep.txt");
      txt << table.to_text();
      std::cout << table.to_text();
    }
    return 0;
  } catch (const Error& e) {
    nlohmann::json err{{"error", e.kind()}, {"message", e.what()}};
    if (const auto* ce = dynamic_cast<const ConfigError*>(&e)) err["key_path"] = ce->key_path();
    if (const auto* ie = dynamic_cast<const IntegrityError*>(&e)) err["path"] = ie->path().string();
    if (const auto* io = dynamic_cast<const IoError*>(&e)) err["path"] = io->path().string();
    std::cerr << err.dump() << '\n';
    return dynamic_cast<const ConfigError*>(&e) != nullptr ? kExitConfig : 1;
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", "internal"}, {"message", e.what()}}.dump() << '\n';
    return 1;
  }
}
