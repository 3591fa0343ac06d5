#include "provenance.hpp"

#include <cstdint>
#include <cstdio>

#include "safe/dataio.hpp"

namespace safe::cli {

std::string file_digest(const std::filesystem::path& path) {
  const auto bytes = read_text_file(path);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunManifest::RunManifest(std::string command, Json config) : command_(std::move(command)), config_(std::move(config)) {}

void RunManifest::input(const std::string& role, const std::filesystem::path& path) {
  inputs_.push_back({{"role", role}, {"path", path.generic_string()}, {"fnv1a64", file_digest(path)}});
}

void RunManifest::output(const std::string& name) { outputs_.push_back(name); }

void RunManifest::write(const std::filesystem::path& dir) const {
  Json j;
  j["command"] = command_;
  j["config"] = config_;
  j["inputs"] = inputs_;
  j["outputs"] = outputs_;
  write_text_file(dir / "manifest.json", dump(j));
}

void emit(RunManifest& manifest, const std::filesystem::path& dir, const std::string& name, const std::string& text) {
  write_text_file(dir / name, text);
  manifest.output(name);
}

}  // namespace safe::cli
