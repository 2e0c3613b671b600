// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>

#include "lumiforge/image.hpp"

namespace lumiforge {

/// Writes an 8-bit PNG (gray for 1 channel, RGB for 3). Values are clamped to
/// [0,1] and rounded to the nearest code.
void write_png(const Image& image, const std::filesystem::path& path);

/// Reads an 8-bit gray or RGB PNG into [0,1] floats. Throws IntegrityError on
/// a missing or undecodable file.
Image read_png(const std::filesystem::path& path);

}  // namespace lumiforge
