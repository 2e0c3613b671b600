// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "lumiforge/dataset_builder.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "lumiforge/error.hpp"
#include "lumiforge/image_io.hpp"
#include "lumiforge/lighting_repr.hpp"
#include "lumiforge/rng.hpp"
#include "lumiforge/scene_renderer.hpp"
#include "lumiforge/tensor_convert.hpp"
#include "lumiforge/trajectory_io.hpp"

namespace lumiforge {

namespace fs = std::filesystem;

namespace {

std::string numbered(const char* prefix, std::size_t t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s_%05zu.png", prefix, t);
  return buf;
}

nlohmann::json sample_to_json(const SampleRecord& s) {
  nlohmann::json variants = nlohmann::json::array();
  for (const auto& v : s.caption_variants) variants.push_back(v.to_json());
  return {{"sample_id", s.sample_id},
          {"subject_id", s.subject_id},
          {"trajectory_path", s.trajectory_path},
          {"frames_dir", s.frames_dir},
          {"canvases_dir", s.canvases_dir},
          {"caption", s.caption.to_json()},
          {"caption_variants", variants},
          {"n_frames", s.n_frames},
          {"resolution", s.resolution}};
}

SampleRecord sample_from_json(const nlohmann::json& doc) {
  SampleRecord s;
  s.sample_id = doc.at("sample_id").get<std::string>();
  s.subject_id = doc.at("subject_id").get<int>();
  s.trajectory_path = doc.at("trajectory_path").get<std::string>();
  s.frames_dir = doc.at("frames_dir").get<std::string>();
  s.canvases_dir = doc.at("canvases_dir").get<std::string>();
  s.caption = Caption::from_json(doc.at("caption"));
  for (const auto& v : doc.at("caption_variants")) s.caption_variants.push_back(Caption::from_json(v));
  s.n_frames = doc.at("n_frames").get<int>();
  s.resolution = doc.at("resolution").get<int>();
  return s;
}

// Key of the light configuration driving frame t.
std::string light_key(const MultiLightTrajectory& traj, std::size_t t) {
  std::ostringstream key;
  for (std::size_t n = 0; n < traj.tracks.size(); ++n) {
    const GridIndex& p = traj.tracks[n].points[t];
    if (n > 0) key << "+";
    key << p.i << "_" << p.j << "_" << p.k;
    if (traj.intensities[n] != 1.0) key << "x" << traj.intensities[n];
  }
  return key.str();
}

void link_or_copy(const fs::path& from, const fs::path& to) {
  std::error_code ec;
  fs::create_hard_link(from, to, ec);
  if (ec) {
    fs::copy_file(from, to, fs::copy_options::overwrite_existing, ec);
    if (ec) throw IoError("cannot place frame (" + ec.message() + ")", to);
  }
}

void make_dirs(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory (" + ec.message() + ")", dir);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw IoError("cannot write file", path);
}

DatasetManifest build_into(const BuildOptions& opt, const fs::path& dir) {
  DatasetManifest manifest;
  manifest.seed = opt.seed;
  manifest.fps = opt.fps;

  std::vector<MultiLightTrajectory> trajectories;
  for (const auto& path : opt.trajectories) {
    trajectories.push_back(resample(load_trajectory(path), opt.frames_per_video));
  }
  manifest.grid = trajectories.front().grid();
  for (std::size_t n = 0; n < trajectories.size(); ++n) {
    if (!(trajectories[n].grid() == manifest.grid)) {
      throw InvalidArgument("trajectory uses a different grid than the first one: " +
                            opt.trajectories[n].string());
    }
  }

  const CanvasGeometry geometry = default_canvas_geometry(opt.resolution, opt.resolution);
  const fs::path canvas_store = dir / "_store" / "canvas";
  make_dirs(canvas_store);
  std::map<std::string, fs::path> canvas_files;

  for (int subject_id : opt.subjects) {
    if (subject_id < 0) throw InvalidArgument("subject ids must be non-negative");
    const SubjectScene scene = build_subject(subject_id, opt.resolution, opt.resolution);
    const std::string subject_dir = std::to_string(subject_id);
    const fs::path frame_store = dir / "_store" / subject_dir;
    make_dirs(frame_store);
    std::map<std::string, fs::path> frame_files;

    for (std::size_t n = 0; n < trajectories.size(); ++n) {
      const MultiLightTrajectory& traj = trajectories[n];
      char id[64];
      std::snprintf(id, sizeof(id), "s%03d_t%03zu", subject_id, n);
      SampleRecord rec;
      rec.sample_id = id;
      rec.subject_id = subject_id;
      rec.n_frames = static_cast<int>(traj.size());
      rec.resolution = opt.resolution;
      const fs::path rel = fs::path(subject_dir) / rec.sample_id;
      rec.frames_dir = rel.generic_string();
      rec.canvases_dir = rel.generic_string();
      rec.trajectory_path = (rel / "trajectory.json").generic_string();
      make_dirs(dir / rel);
      save_trajectory(traj, dir / rel / "trajectory.json");

      for (std::size_t t = 0; t < traj.size(); ++t) {
        const std::string key = light_key(traj, t);
        auto fit = frame_files.find(key);
        if (fit == frame_files.end()) {
          const fs::path file = frame_store / (key + ".png");
          write_png(shade_frame(scene, lights_at(traj, t)), file);
          fit = frame_files.emplace(key, file).first;
        }
        link_or_copy(fit->second, dir / rel / numbered("frame", t));

        auto cit = canvas_files.find(key);
        if (cit == canvas_files.end()) {
          const fs::path file = canvas_store / (key + ".png");
          Image canvas = render_canvas_frame_linear(traj, t, geometry);
          canvas.clamp01();
          write_png(canvas, file);
          cit = canvas_files.emplace(key, file).first;
        }
        link_or_copy(cit->second, dir / rel / numbered("canvas", t));
      }

      // Captions describe the subject only, so every trajectory of a subject shares one.
      const std::uint64_t caption_seed = mix_seed(opt.seed, static_cast<std::uint64_t>(subject_id));
      rec.caption = generate_caption(scene, caption_seed);
      if (opt.caption_augmentation) {
        rec.caption_variants = augment_caption(rec.caption, opt.caption_variants,
                                               mix_seed(caption_seed, static_cast<std::uint64_t>(subject_id)));
      }
      manifest.samples.push_back(std::move(rec));
    }
  }
  write_text(dir / "manifest.json", manifest.to_json().dump(2) + "\n");
  return manifest;
}

}  // namespace

nlohmann::json DatasetManifest::to_json() const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& s : samples) list.push_back(sample_to_json(s));
  return {{"version", version},
          {"grid", grid_to_json(grid)},
          {"seed", seed},
          {"fps", fps},
          {"samples", list}};
}

DatasetManifest DatasetManifest::from_json(const nlohmann::json& doc, fs::path root) {
  DatasetManifest m;
  m.version = doc.at("version").get<std::string>();
  if (m.version != kManifestVersion) {
    throw IntegrityError("unsupported manifest version " + m.version, root / "manifest.json");
  }
  m.grid = grid_from_json(doc.at("grid"));
  m.seed = doc.at("seed").get<std::uint64_t>();
  m.fps = doc.at("fps").get<double>();
  for (const auto& s : doc.at("samples")) m.samples.push_back(sample_from_json(s));
  m.root = std::move(root);
  return m;
}

const SampleRecord& DatasetManifest::find(const std::string& sample_id) const {
  for (const auto& s : samples) {
    if (s.sample_id == sample_id) return s;
  }
  throw NotFound("no sample '" + sample_id + "' in manifest");
}

MultiLightTrajectory resample(const MultiLightTrajectory& trajectory, int n_frames) {
  if (n_frames < 1) throw InvalidArgument("frames_per_video must be at least 1");
  if (trajectory.size() == 0) throw InvalidArgument("trajectory is empty");
  const auto L = static_cast<std::int64_t>(trajectory.size());
  if (L == n_frames) return trajectory;
  MultiLightTrajectory out = trajectory;
  for (auto& track : out.tracks) {
    std::vector<GridIndex> points;
    points.reserve(static_cast<std::size_t>(n_frames));
    for (int t = 0; t < n_frames; ++t) {
      const double s = n_frames == 1 ? 0.0 : static_cast<double>(t) * (L - 1) / (n_frames - 1);
      points.push_back(track.points[static_cast<std::size_t>(std::lround(s))]);
    }
    track.points = std::move(points);
  }
  return out;
}

DatasetManifest build_dataset(const BuildOptions& options) {
  if (options.subjects.empty()) throw InvalidArgument("no subjects given");
  if (options.trajectories.empty()) throw InvalidArgument("no trajectories given");
  if (options.resolution < 16) throw InvalidArgument("resolution must be at least 16");
  if (options.out_dir.empty()) throw InvalidArgument("output directory not set");

  fs::path out = options.out_dir;
  if (!out.has_filename()) out = out.parent_path();
  const fs::path tmp = out.string() + ".tmp";
  std::error_code ec;
  fs::remove_all(tmp, ec);
  try {
    make_dirs(tmp);
    DatasetManifest manifest = build_into(options, tmp);
    fs::remove_all(out, ec);
    if (ec) throw IoError("cannot replace output directory (" + ec.message() + ")", out);
    fs::rename(tmp, out, ec);
    if (ec) throw IoError("cannot move dataset into place (" + ec.message() + ")", out);
    manifest.root = out;
    return manifest;
  } catch (...) {
    fs::remove_all(tmp, ec);
    throw;
  }
}

std::uint64_t dataset_video_count(std::uint64_t subjects, std::uint64_t trajectories_per_subject) {
  return subjects * trajectories_per_subject;
}

DatasetManifest load_manifest(const fs::path& manifest_or_dir) {
  const fs::path file =
      fs::is_directory(manifest_or_dir) ? manifest_or_dir / "manifest.json" : manifest_or_dir;
  std::ifstream in(file);
  if (!in) throw NotFound("manifest not found: " + file.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw IntegrityError(std::string("manifest is not valid JSON (") + e.what() + ")", file);
  }
  return DatasetManifest::from_json(doc, file.parent_path());
}

namespace {

std::vector<Image> read_sequence(const fs::path& dir, const char* prefix, int n_frames, int resolution,
                                 int channels) {
  int on_disk = 0;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind(std::string(prefix) + "_", 0) == 0 && entry.path().extension() == ".png") ++on_disk;
  }
  if (ec) throw IntegrityError("sample directory unreadable", dir);
  std::vector<Image> images;
  for (int t = 0; t < n_frames; ++t) {
    const fs::path file = dir / numbered(prefix, static_cast<std::size_t>(t));
    Image img = read_png(file);
    if (img.width() != resolution || img.height() != resolution || img.channels() != channels) {
      throw IntegrityError("image shape disagrees with manifest", file);
    }
    images.push_back(std::move(img));
  }
  if (on_disk != n_frames) {
    throw IntegrityError("found " + std::to_string(on_disk) + " " + prefix + " files, manifest says " +
                             std::to_string(n_frames),
                         dir);
  }
  return images;
}

}  // namespace

TrainingSample load_sample(const DatasetManifest& manifest, const std::string& sample_id) {
  const SampleRecord& rec = manifest.find(sample_id);
  TrainingSample s;
  s.sample_id = rec.sample_id;
  s.frames = images_to_tensor(
      read_sequence(manifest.root / rec.frames_dir, "frame", rec.n_frames, rec.resolution, 3));
  s.canvases = images_to_tensor(
      read_sequence(manifest.root / rec.canvases_dir, "canvas", rec.n_frames, rec.resolution, 1));
  s.caption = rec.caption;
  s.caption_variants = rec.caption_variants;
  return s;
}

}  // namespace lumiforge
