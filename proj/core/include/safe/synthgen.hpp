#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "safe/types.hpp"

namespace safe {

struct PlantedParameter {
  std::string name;
  double center = 0.0;
  double spread = 0.0;
};

struct BlobSpec {
  /// Padded with zeros up to feature_dim.
  std::vector<double> center;
  double spread = 1.0;
  std::size_t count = 0;
  std::vector<PlantedParameter> params;
};

/// Every blob must plant the same parameter names, in the same order.
struct SynthSpec {
  std::vector<BlobSpec> blobs;
  std::size_t noise_count = 0;
  std::size_t feature_dim = 2;
  std::uint64_t seed = 0;

  /// Throws kInvalidArgument or kSeparabilityViolation (blob centers closer
  /// than 6 x the largest spread).
  void validate() const;
};

inline constexpr int kNoiseLabel = -1;

struct SynthDataset {
  FeatureMatrix features;
  ParameterTable params;
  /// Blob index per row, kNoiseLabel for noise rows.
  std::vector<int> truth;
};

/// Draw order: blobs in order, each point's features then its parameters;
/// then noise points, features then parameters. Noise features are uniform
/// over the blob-center bounding box widened by 3 x the largest spread; noise
/// parameters are uniform over the range of planted centers.
SynthDataset generate(const SynthSpec& spec);

SynthSpec parse_synth_spec(const std::string& json_text);
std::string dump_synth_spec(const SynthSpec& spec);

/// Three well-separated blobs in `dim` dimensions with a planted gaze angle,
/// head pose and pupil distance, plus the matching unsafe-value spec.
std::pair<SynthSpec, UnsafeValueSpec> three_blob_preset(std::size_t dim, std::size_t points, double noise_fraction,
                                                        std::uint64_t seed);

}  // namespace safe
