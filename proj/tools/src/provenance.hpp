#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "safe/json.hpp"

namespace safe::cli {

/// 64-bit FNV-1a of a file's bytes, as 16 hex digits.
std::string file_digest(const std::filesystem::path& path);

/// Index written as manifest.json next to every command's outputs. Inputs are
/// recorded as given on the command line plus a content digest; outputs are
/// names relative to the output directory. No wall-clock fields, so reruns
/// are byte-identical.
class RunManifest {
 public:
  RunManifest(std::string command, Json config);
  void input(const std::string& role, const std::filesystem::path& path);
  void output(const std::string& name);
  void write(const std::filesystem::path& dir) const;

 private:
  std::string command_;
  Json config_;
  Json inputs_ = Json::array();
  std::vector<std::string> outputs_;
};

/// Writes `text` to dir/name and records it.
void emit(RunManifest& manifest, const std::filesystem::path& dir, const std::string& name, const std::string& text);

}  // namespace safe::cli
