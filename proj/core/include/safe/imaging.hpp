#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "safe/types.hpp"

namespace safe {

/// Single-channel image, row-major, intensities in [0, 1].
class GrayImage {
 public:
  GrayImage(std::size_t width, std::size_t height, std::vector<double> pixels);
  static GrayImage filled(std::size_t width, std::size_t height, double value);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  double at(std::size_t x, std::size_t y) const { return pixels_[y * width_ + x]; }
  const std::vector<double>& pixels() const noexcept { return pixels_; }

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<double> pixels_;
};

inline constexpr std::size_t kSurrogateInputSize = 224;
inline constexpr std::size_t kSurrogateGrid = 16;
inline constexpr std::size_t kSurrogateFeatureCount = 2 * kSurrogateGrid * kSurrogateGrid;

/// Area-average (box) resampling. Each output pixel is the overlap-weighted
/// mean of the source pixels its footprint covers.
GrayImage downsample(const GrayImage& img, std::size_t target_w, std::size_t target_h);

/// Per-pixel gradient magnitude from central differences (one-sided at the
/// borders; zero along an axis of extent 1). Row-major, same size as `img`;
/// values may exceed 1.
std::vector<double> gradient_magnitude(const GrayImage& img);

/// 16x16 block-mean intensities followed by 16x16 block-mean gradient
/// magnitudes of `img` (any size >= 16x16), 512 values in row-major block order.
std::vector<double> block_features(const GrayImage& img);

/// Deterministic stand-in for a pretrained CNN extractor: each image is
/// brought to 224x224 (downsampled when larger) and mapped to block_features.
FeatureMatrix surrogate_extract(const std::vector<std::pair<std::string, GrayImage>>& images);

/// PGM reader (P2 ASCII and P5 binary, maxval up to 65535). Intensities are
/// scaled to [0, 1] by maxval.
GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(const GrayImage& img, const std::filesystem::path& path, int maxval = 255);

}  // namespace safe
