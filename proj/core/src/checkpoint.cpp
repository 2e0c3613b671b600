// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "lumiforge/checkpoint.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <map>

#include "lumiforge/error.hpp"

namespace lumiforge {
namespace {

constexpr std::array<char, 8> kMagic = {'L', 'F', 'C', 'K', 'P', 'T', '\0', '\0'};

template <typename T>
void write_le(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes{};
  for (std::size_t n = 0; n < sizeof(T); ++n) {
    bytes[n] = static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * n)) & 0xFF);
  }
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T read_le(std::istream& in, const std::filesystem::path& path) {
  std::array<unsigned char, sizeof(T)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw IntegrityError("truncated checkpoint", path);
  std::uint64_t value = 0;
  for (std::size_t n = 0; n < sizeof(T); ++n) value |= static_cast<std::uint64_t>(bytes[n]) << (8 * n);
  return static_cast<T>(value);
}

nlohmann::json read_header(std::istream& in, const std::filesystem::path& path) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw IntegrityError("not a checkpoint file", path);
  const auto format = read_le<std::uint32_t>(in, path);
  if (format != kCheckpointFormat) {
    throw IntegrityError("unsupported checkpoint format " + std::to_string(format), path);
  }
  const auto length = read_le<std::uint64_t>(in, path);
  std::string text(length, '\0');
  in.read(text.data(), static_cast<std::streamsize>(length));
  if (!in) throw IntegrityError("truncated checkpoint header", path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception&) {
    throw IntegrityError("corrupt checkpoint header", path);
  }
}

}  // namespace

NamedTensors module_state(const torch::nn::Module& module) {
  NamedTensors out;
  for (const auto& item : module.named_parameters(true)) out.emplace_back(item.key(), item.value());
  for (const auto& item : module.named_buffers(true)) out.emplace_back(item.key(), item.value());
  return out;
}

void load_module_state(torch::nn::Module& module, const NamedTensors& tensors,
                       const std::filesystem::path& origin) {
  std::map<std::string, torch::Tensor> by_name(tensors.begin(), tensors.end());
  torch::NoGradGuard no_grad;
  auto assign = [&](const std::string& name, torch::Tensor& target) {
    auto it = by_name.find(name);
    if (it == by_name.end()) throw IntegrityError("checkpoint lacks tensor '" + name + "'", origin);
    if (it->second.sizes() != target.sizes()) {
      throw IntegrityError("shape mismatch for tensor '" + name + "'", origin);
    }
    target.copy_(it->second.to(target.dtype()));
  };
  for (auto& item : module.named_parameters(true)) assign(item.key(), item.value());
  for (auto& item : module.named_buffers(true)) assign(item.key(), item.value());
}

void save_checkpoint(const std::filesystem::path& path, const std::string& kind,
                     const nlohmann::json& config, const nlohmann::json& meta,
                     const NamedTensors& tensors) {
  nlohmann::json header;
  header["format"] = kCheckpointFormat;
  header["kind"] = kind;
  header["config"] = config;
  header["meta"] = meta;
  header["tensors"] = nlohmann::json::array();
  for (const auto& [name, tensor] : tensors) {
    header["tensors"].push_back({{"name", name}, {"shape", tensor.sizes().vec()}});
  }
  const std::string text = header.dump();

  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open checkpoint for writing", path);
  out.write(kMagic.data(), kMagic.size());
  write_le<std::uint32_t>(out, kCheckpointFormat);
  write_le<std::uint64_t>(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const auto& [name, tensor] : tensors) {
    const auto t = tensor.detach().to(torch::kFloat32).contiguous();
    for (std::int64_t n = 0; n < t.numel(); ++n) {
      std::uint32_t bits = 0;
      const float v = t.data_ptr<float>()[n];
      std::memcpy(&bits, &v, sizeof(bits));
      write_le<std::uint32_t>(out, bits);
    }
  }
  if (!out) throw IoError("failed writing checkpoint", path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFound("checkpoint not found: " + path.string());
  Checkpoint ckpt;
  ckpt.header = read_header(in, path);
  for (const auto& entry : ckpt.header.at("tensors")) {
    const auto shape = entry.at("shape").get<std::vector<std::int64_t>>();
    auto tensor = torch::empty(shape, torch::kFloat32);
    for (std::int64_t n = 0; n < tensor.numel(); ++n) {
      const auto bits = read_le<std::uint32_t>(in, path);
      float v = 0.0f;
      std::memcpy(&v, &bits, sizeof(v));
      tensor.data_ptr<float>()[n] = v;
    }
    ckpt.tensors.emplace_back(entry.at("name").get<std::string>(), std::move(tensor));
  }
  return ckpt;
}

nlohmann::json read_checkpoint_header(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFound("checkpoint not found: " + path.string());
  return read_header(in, path);
}

}  // namespace lumiforge
