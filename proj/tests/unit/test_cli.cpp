// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "lumiforge/dataset_builder.hpp"
#include "lumiforge/trajectory_io.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;

namespace lumiforge {
namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

RunResult run_cli(const std::string& args, const fs::path& scratch) {
  const fs::path err_file = scratch / "stderr.txt";
  const std::string cmd = std::string(LUMIFORGE_CLI_PATH) + " " + args + " 2>" + err_file.string();
  RunResult r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream e(err_file);
  std::stringstream ss;
  ss << e.rdbuf();
  r.err = ss.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// The JSON error object is the last line of stderr.
nlohmann::json error_json(const std::string& err) {
  std::string line, last;
  std::istringstream in(err);
  while (std::getline(in, line))
    if (!line.empty()) last = line;
  return nlohmann::json::parse(last);
}

nlohmann::json tiny_config() {
  const std::string traj = std::string(LUMIFORGE_CONFIG_DIR) + "/trajectories/";
  return {{"schema_version", 1},
          {"seed", 3},
          {"workdir", "run"},
          {"dataset",
           {{"subjects", {0}},
            {"trajectories", {traj + "horizontal.json", traj + "arc.json"}},
            {"frames_per_video", 4},
            {"resolution", 16}}}};
}

TEST(Cli, UnknownConfigKeyExitsTwoWithKeyPath) {
  testing::TempDir dir("cli");
  auto doc = tiny_config();
  doc["train"] = {{"learning_rate", 1e-4}};
  std::ofstream(dir / "c.json") << doc.dump();
  const RunResult r = run_cli("generate-dataset --config " + (dir / "c.json").string(), dir.path());
  EXPECT_EQ(r.exit_code, 2);
  const auto e = error_json(r.err);
  EXPECT_EQ(e.at("error"), "config");
  EXPECT_EQ(e.at("key_path"), "/train/learning_rate");
}

TEST(Cli, MissingCheckpointIsStructuredError) {
  testing::TempDir dir("cli");
  std::ofstream(dir / "c.json") << tiny_config().dump();
  const RunResult r = run_cli("train --config " + (dir / "c.json").string(), dir.path());
  EXPECT_EQ(r.exit_code, 1);
  const auto e = error_json(r.err);
  EXPECT_TRUE(e.contains("error"));
  EXPECT_TRUE(e.contains("message"));
}

TEST(Cli, GenerateDatasetIsReproducible) {
  testing::TempDir dir("cli");
  std::ofstream(dir / "c.json") << tiny_config().dump();
  const std::string args = "generate-dataset --config " + (dir / "c.json").string();
  const RunResult a = run_cli(args, dir.path());
  ASSERT_EQ(a.exit_code, 0) << a.err;
  const fs::path manifest = dir / "run" / "dataset" / "manifest.json";
  ASSERT_TRUE(fs::exists(manifest)) << a.out;
  const std::string first = slurp(manifest);
  const RunResult b = run_cli(args, dir.path());
  ASSERT_EQ(b.exit_code, 0) << b.err;
  EXPECT_EQ(slurp(manifest), first);
  EXPECT_EQ(load_manifest(manifest).samples.size(), 2u);
}

TEST(Cli, SeedEnvironmentOverride) {
  testing::TempDir dir("cli");
  std::ofstream(dir / "c.json") << tiny_config().dump();
  const RunResult r = run_cli("generate-dataset --config " + (dir / "c.json").string(), dir.path());
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const RunResult s = ::setenv("LUMIFORGE_SEED", "99", 1) == 0
                          ? run_cli("generate-dataset --config " + (dir / "c.json").string(), dir.path())
                          : RunResult{};
  ::unsetenv("LUMIFORGE_SEED");
  ASSERT_EQ(s.exit_code, 0) << s.err;
  EXPECT_EQ(load_manifest(dir / "run" / "dataset").seed, 99u);
}

TEST(Cli, TrajectorySubcommandWritesLoadableFile) {
  testing::TempDir dir("cli");
  const RunResult r = run_cli("trajectory --kind linear --start 0,28,16 --end 32,28,16 --frames 9 --out " +
                                  (dir / "t.json").string(),
                              dir.path());
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto t = load_trajectory(dir / "t.json");
  EXPECT_EQ(t.size(), 9u);
  EXPECT_EQ(t.tracks[0].kind, TrajectoryKind::kHorizontal);
  const RunResult bad = run_cli("trajectory --kind linear --start 0,28 --end 32,28,16 --frames 9 --out " +
                                    (dir / "u.json").string(),
                                dir.path());
  EXPECT_NE(bad.exit_code, 0);
}

TEST(Cli, EvaluateSelfReference) {
  testing::TempDir dir("cli");
  std::ofstream(dir / "c.json") << tiny_config().dump();
  ASSERT_EQ(run_cli("generate-dataset --config " + (dir / "c.json").string(), dir.path()).exit_code, 0);
  const DatasetManifest m = load_manifest(dir / "run" / "dataset");
  const fs::path sample = m.root / m.samples[0].frames_dir;
  const RunResult r = run_cli("evaluate --video " + sample.string() + " --reference " + sample.string() +
                                  " --out " + (dir / "report.json").string() + " --csv " +
                                  (dir / "frames.csv").string(),
                              dir.path());
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto report = nlohmann::json::parse(slurp(dir / "report.json"));
  EXPECT_NEAR(report.at("consistency_embed").get<double>(), 1.0, 0.2);
  EXPECT_NEAR(report.at("brightness_consistency").get<double>(), 1.0, 1e-9);
  EXPECT_TRUE(fs::exists(dir / "frames.csv"));
}

TEST(Cli, HelpAndUnknownSubcommand) {
  testing::TempDir dir("cli");
  EXPECT_EQ(run_cli("--help", dir.path()).exit_code, 0);
  EXPECT_NE(run_cli("frobnicate", dir.path()).exit_code, 0);
}

}  // namespace
}  // namespace lumiforge
