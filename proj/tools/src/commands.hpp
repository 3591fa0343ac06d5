#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "safe/types.hpp"

namespace safe::cli {

namespace fs = std::filesystem;

struct ExtractOptions {
  std::optional<fs::path> images;
  std::optional<fs::path> features;
  fs::path out;
};

struct ClusterOptions {
  fs::path features;
  RunConfig config;
  fs::path out;
};

struct AnalyzeOptions {
  fs::path clusters;
  fs::path params;
  std::optional<fs::path> spec;
  double rr_threshold = 0.5;
  fs::path out;
};

struct SelectOptions {
  fs::path clusters;
  fs::path improvement;
  std::size_t test_size = 0;
  double test_acc = 0.0;
  double sf = 0.3;
  std::optional<fs::path> train_ids;
  std::optional<std::size_t> balance_target;
  std::uint64_t seed = 0;
  std::string strategy = "core";
  fs::path out;
};

struct CompareOptions {
  std::vector<fs::path> runs;
  std::optional<fs::path> out;
};

struct SynthOptions {
  std::optional<fs::path> spec;
  std::optional<std::string> preset;
  std::size_t dim = 512;
  std::size_t points = 300;
  double noise = 0.05;
  std::optional<std::uint64_t> seed;
  fs::path out;
};

// Each command throws safe::Error on failure; the caller maps codes to exits.
void cmd_extract(const ExtractOptions& opt, std::ostream& out);
void cmd_cluster(const ClusterOptions& opt, std::ostream& out);
void cmd_analyze(const AnalyzeOptions& opt, std::ostream& out);
void cmd_select(const SelectOptions& opt, std::ostream& out);
void cmd_compare(const CompareOptions& opt, std::ostream& out);
void cmd_synth(const SynthOptions& opt, std::ostream& out);

/// One accuracy per line; blank lines and lines starting with '#' skipped.
std::vector<double> read_accuracy_list(const fs::path& path);
/// One id per line; blank lines skipped.
std::vector<std::string> read_id_list(const fs::path& path);

}  // namespace safe::cli
