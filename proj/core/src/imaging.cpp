#include "safe/imaging.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>

#include "safe/error.hpp"

namespace safe {
namespace {

struct Tap {
  std::size_t src;
  std::size_t weight;
};

// Source pixel sx spans [sx*target, (sx+1)*target) and output pixel ox spans
// [ox*source, (ox+1)*source) in units of 1/(source*target), so every overlap
// weight is an integer and the weights of one output pixel sum to `source`.
std::vector<std::vector<Tap>> axis_taps(std::size_t source, std::size_t target) {
  std::vector<std::vector<Tap>> taps(target);
  for (std::size_t o = 0; o < target; ++o) {
    const std::size_t lo = o * source;
    const std::size_t hi = (o + 1) * source;
    for (std::size_t s = lo / target; s < source && s * target < hi; ++s) {
      const std::size_t a = std::max(lo, s * target);
      const std::size_t b = std::min(hi, (s + 1) * target);
      if (b > a) taps[o].push_back({s, b - a});
    }
  }
  return taps;
}

std::vector<double> area_average(const std::vector<double>& pixels, std::size_t sw, std::size_t sh,
                                 std::size_t tw, std::size_t th) {
  if (tw == 0 || th == 0) throw Error(ErrorCode::kInvalidArgument, "target size must be >= 1");
  if (tw > sw || th > sh) {
    throw Error(ErrorCode::kUpsampleRequested,
                std::to_string(sw) + "x" + std::to_string(sh) + " -> " + std::to_string(tw) +
                    "x" + std::to_string(th));
  }
  const auto xs = axis_taps(sw, tw);
  const auto ys = axis_taps(sh, th);
  const double norm = static_cast<double>(sw) * static_cast<double>(sh);
  std::vector<double> out(tw * th);
  for (std::size_t oy = 0; oy < th; ++oy) {
    for (std::size_t ox = 0; ox < tw; ++ox) {
      double acc = 0.0;
      for (const auto& ty : ys[oy]) {
        double row_acc = 0.0;
        const double* src = pixels.data() + ty.src * sw;
        for (const auto& tx : xs[ox]) row_acc += static_cast<double>(tx.weight) * src[tx.src];
        acc += static_cast<double>(ty.weight) * row_acc;
      }
      out[oy * tw + ox] = acc / norm;
    }
  }
  return out;
}

std::size_t next_pgm_token(const std::string& data, std::size_t& pos, const std::string& source) {
  while (pos < data.size()) {
    if (data[pos] == '#') {
      while (pos < data.size() && data[pos] != '\n') ++pos;
    } else if (std::isspace(static_cast<unsigned char>(data[pos]))) {
      ++pos;
    } else {
      break;
    }
  }
  std::size_t start = pos;
  while (pos < data.size() && std::isdigit(static_cast<unsigned char>(data[pos]))) ++pos;
  if (start == pos) throw Error(ErrorCode::kParseError, source + ": malformed PGM header");
  return std::stoul(data.substr(start, pos - start));
}

}  // namespace

GrayImage::GrayImage(std::size_t width, std::size_t height, std::vector<double> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width_ == 0 || height_ == 0) throw Error(ErrorCode::kInvalidArgument, "image has zero extent");
  if (pixels_.size() != width_ * height_) {
    throw Error(ErrorCode::kInvalidArgument, "pixel count does not match width x height");
  }
  for (double p : pixels_) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "pixel intensities must lie in [0, 1]");
    }
  }
}

GrayImage GrayImage::filled(std::size_t width, std::size_t height, double value) {
  return GrayImage(width, height, std::vector<double>(width * height, value));
}

GrayImage downsample(const GrayImage& img, std::size_t target_w, std::size_t target_h) {
  auto out = area_average(img.pixels(), img.width(), img.height(), target_w, target_h);
  for (double& p : out) p = std::clamp(p, 0.0, 1.0);
  return GrayImage(target_w, target_h, std::move(out));
}

std::vector<double> gradient_magnitude(const GrayImage& img) {
  const std::size_t w = img.width();
  const std::size_t h = img.height();
  std::vector<double> out(w * h);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      double gx = 0.0;
      if (w > 1) {
        if (x == 0) {
          gx = img.at(1, y) - img.at(0, y);
        } else if (x == w - 1) {
          gx = img.at(x, y) - img.at(x - 1, y);
        } else {
          gx = 0.5 * (img.at(x + 1, y) - img.at(x - 1, y));
        }
      }
      double gy = 0.0;
      if (h > 1) {
        if (y == 0) {
          gy = img.at(x, 1) - img.at(x, 0);
        } else if (y == h - 1) {
          gy = img.at(x, y) - img.at(x, y - 1);
        } else {
          gy = 0.5 * (img.at(x, y + 1) - img.at(x, y - 1));
        }
      }
      out[y * w + x] = std::sqrt(gx * gx + gy * gy);
    }
  }
  return out;
}

std::vector<double> block_features(const GrayImage& img) {
  constexpr std::size_t g = kSurrogateGrid;
  auto features = area_average(img.pixels(), img.width(), img.height(), g, g);
  auto grads = area_average(gradient_magnitude(img), img.width(), img.height(), g, g);
  features.insert(features.end(), grads.begin(), grads.end());
  return features;
}

FeatureMatrix surrogate_extract(const std::vector<std::pair<std::string, GrayImage>>& images) {
  std::vector<std::string> ids;
  std::vector<double> values;
  ids.reserve(images.size());
  values.reserve(images.size() * kSurrogateFeatureCount);
  for (const auto& [id, img] : images) {
    std::vector<double> row;
    if (img.width() == kSurrogateInputSize && img.height() == kSurrogateInputSize) {
      row = block_features(img);
    } else {
      row = block_features(downsample(img, kSurrogateInputSize, kSurrogateInputSize));
    }
    ids.push_back(id);
    values.insert(values.end(), row.begin(), row.end());
  }
  return FeatureMatrix(std::move(ids), std::move(values), kSurrogateFeatureCount);
}

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open '" + path.string() + "'");
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const std::string source = path.string();
  if (data.size() < 2 || data[0] != 'P' || (data[1] != '2' && data[1] != '5')) {
    throw Error(ErrorCode::kParseError, source + ": not a P2/P5 PGM file");
  }
  const bool binary = data[1] == '5';
  std::size_t pos = 2;
  const std::size_t w = next_pgm_token(data, pos, source);
  const std::size_t h = next_pgm_token(data, pos, source);
  const std::size_t maxval = next_pgm_token(data, pos, source);
  if (w == 0 || h == 0 || maxval == 0 || maxval > 65535) {
    throw Error(ErrorCode::kParseError, source + ": invalid PGM dimensions or maxval");
  }
  std::vector<double> pixels(w * h);
  const double scale = 1.0 / static_cast<double>(maxval);
  if (binary) {
    ++pos;  // single whitespace after maxval
    const std::size_t bytes = maxval < 256 ? 1 : 2;
    if (data.size() < pos + w * h * bytes) throw Error(ErrorCode::kParseError, source + ": truncated");
    for (std::size_t i = 0; i < w * h; ++i) {
      std::size_t v = static_cast<unsigned char>(data[pos + i * bytes]);
      if (bytes == 2) v = (v << 8) | static_cast<unsigned char>(data[pos + i * bytes + 1]);
      if (v > maxval) throw Error(ErrorCode::kParseError, source + ": sample exceeds maxval");
      pixels[i] = static_cast<double>(v) * scale;
    }
  } else {
    for (std::size_t i = 0; i < w * h; ++i) {
      const std::size_t v = next_pgm_token(data, pos, source);
      if (v > maxval) throw Error(ErrorCode::kParseError, source + ": sample exceeds maxval");
      pixels[i] = static_cast<double>(v) * scale;
    }
  }
  return GrayImage(w, h, std::move(pixels));
}

void write_pgm(const GrayImage& img, const std::filesystem::path& path, int maxval) {
  if (maxval < 1 || maxval > 255) throw Error(ErrorCode::kInvalidArgument, "maxval must be in [1, 255]");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot open '" + path.string() + "'");
  out << "P5\n" << img.width() << ' ' << img.height() << '\n' << maxval << '\n';
  for (double p : img.pixels()) {
    out.put(static_cast<char>(static_cast<unsigned char>(std::lround(p * maxval))));
  }
  if (!out) throw Error(ErrorCode::kIoFailure, "write to '" + path.string() + "' failed");
}

}  // namespace safe
