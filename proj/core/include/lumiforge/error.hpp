// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

namespace lumiforge {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

/// A precondition on an argument was violated (bad shape, out of range, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "invalid_argument"; }
};

class NotFound : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "not_found"; }
};

/// On-disk data disagrees with what the manifest or checkpoint header promises.
class IntegrityError : public Error {
 public:
  IntegrityError(const std::string& what, std::filesystem::path path)
      : Error(what + ": " + path.string()), path_(std::move(path)) {}
  const std::filesystem::path& path() const noexcept { return path_; }
  const char* kind() const noexcept override { return "integrity"; }

 private:
  std::filesystem::path path_;
};

class IoError : public Error {
 public:
  IoError(const std::string& what, std::filesystem::path path)
      : Error(what + ": " + path.string()), path_(std::move(path)) {}
  const std::filesystem::path& path() const noexcept { return path_; }
  const char* kind() const noexcept override { return "io"; }

 private:
  std::filesystem::path path_;
};

/// Config document failed schema validation. key_path is a JSON pointer.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::string key_path)
      : Error(what + " at '" + key_path + "'"), key_path_(std::move(key_path)) {}
  const std::string& key_path() const noexcept { return key_path_; }
  const char* kind() const noexcept override { return "config"; }

 private:
  std::string key_path_;
};

/// Training produced a non-finite loss.
class DivergenceError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "divergence"; }
};

}  // namespace lumiforge
