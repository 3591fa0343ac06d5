#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "helpers.hpp"
#include "safe/error.hpp"
#include "safe/imaging.hpp"

using namespace safe;

namespace {

GrayImage random_image(std::mt19937_64& gen, std::size_t w, std::size_t h) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> px(w * h);
  for (auto& p : px) p = u(gen);
  return GrayImage(w, h, std::move(px));
}

}  // namespace

TEST_CASE("downsample 8x8 to 4x4 equals 2x2 block means") {
  std::mt19937_64 gen(5);
  auto img = random_image(gen, 8, 8);
  auto small = downsample(img, 4, 4);
  for (std::size_t y = 0; y < 4; ++y) {
    for (std::size_t x = 0; x < 4; ++x) {
      const double m = (img.at(2 * x, 2 * y) + img.at(2 * x + 1, 2 * y) + img.at(2 * x, 2 * y + 1) +
                        img.at(2 * x + 1, 2 * y + 1)) / 4.0;
      CHECK(small.at(x, y) == doctest::Approx(m).epsilon(1e-14));
    }
  }
}

TEST_CASE("downsample preserves constants and the global mean") {
  auto flat = downsample(GrayImage::filled(37, 23, 0.3), 10, 7);
  for (double p : flat.pixels()) CHECK(p == doctest::Approx(0.3).epsilon(1e-14));

  std::mt19937_64 gen(6);
  auto img = random_image(gen, 30, 21);
  auto out = downsample(img, 10, 7);  // integer factors: means agree exactly
  double a = 0, b = 0;
  for (double p : img.pixels()) a += p;
  for (double p : out.pixels()) b += p;
  CHECK(b / 70.0 == doctest::Approx(a / 630.0).epsilon(1e-12));
}

TEST_CASE("non-integer factors keep values in range") {
  std::mt19937_64 gen(7);
  auto img = random_image(gen, 300, 251);
  auto out = downsample(img, 224, 224);
  CHECK(out.width() == 224);
  for (double p : out.pixels()) {
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
  }
}

TEST_CASE("upsampling is rejected") {
  auto img = GrayImage::filled(10, 10, 0.0);
  CHECK_THROWS_AS(downsample(img, 11, 10), Error);
  try {
    downsample(img, 10, 20);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUpsampleRequested);
  }
}

TEST_CASE("pixel validation") {
  CHECK_THROWS_AS(GrayImage(2, 2, {0, 0, 0}), Error);
  CHECK_THROWS_AS(GrayImage(1, 1, {1.5}), Error);
}

TEST_CASE("gradient of a horizontal ramp") {
  std::vector<double> px(5 * 3);
  for (std::size_t y = 0; y < 3; ++y)
    for (std::size_t x = 0; x < 5; ++x) px[y * 5 + x] = 0.1 * double(x);
  auto g = gradient_magnitude(GrayImage(5, 3, px));
  for (double v : g) CHECK(v == doctest::Approx(0.1));
}

TEST_CASE("block features of a step edge placed mid-block") {
  // intensity jumps 0 -> 1 at x = 105; block 7 covers columns 98..111
  std::vector<double> px(224 * 224, 0.0);
  for (std::size_t y = 0; y < 224; ++y)
    for (std::size_t x = 105; x < 224; ++x) px[y * 224 + x] = 1.0;
  auto f = block_features(GrayImage(224, 224, px));
  REQUIRE(f.size() == kSurrogateFeatureCount);
  for (std::size_t by = 0; by < 16; ++by) {
    CHECK(f[by * 16 + 6] == 0.0);
    CHECK(f[by * 16 + 7] == doctest::Approx(0.5));
    CHECK(f[by * 16 + 8] == 1.0);
    const double* grad = f.data() + 256;
    // columns 104 and 105 each see a central difference of 0.5
    CHECK(grad[by * 16 + 7] == doctest::Approx(1.0 / 14.0));
    CHECK(grad[by * 16 + 6] == 0.0);
    CHECK(grad[by * 16 + 8] == 0.0);
  }
}

TEST_CASE("surrogate extraction is deterministic and sized") {
  std::mt19937_64 gen(8);
  std::vector<std::pair<std::string, GrayImage>> imgs;
  imgs.emplace_back("a", random_image(gen, 224, 224));
  imgs.emplace_back("b", random_image(gen, 320, 240));
  imgs.emplace_back("c", random_image(gen, 448, 448));
  auto x = surrogate_extract(imgs);
  auto y = surrogate_extract(imgs);
  CHECK(x.rows() == 3);
  CHECK(x.cols() == 512);
  CHECK(x.values() == y.values());
}

TEST_CASE("pgm round trip") {
  std::mt19937_64 gen(9);
  std::vector<double> px(12 * 7);
  std::uniform_int_distribution<int> u(0, 255);
  for (auto& p : px) p = u(gen) / 255.0;
  GrayImage img(12, 7, px);
  auto dir = testing::temp_dir("pgm");
  write_pgm(img, dir / "a.pgm");
  auto back = read_pgm(dir / "a.pgm");
  REQUIRE(back.width() == 12);
  for (std::size_t i = 0; i < px.size(); ++i) CHECK(back.pixels()[i] == doctest::Approx(px[i]).epsilon(1e-12));

  {
    std::ofstream out(dir / "wide.pgm", std::ios::binary);
    out << "P5\n# sixteen bit\n2 1\n65535\n";
    const unsigned char bytes[] = {0xFF, 0xFF, 0x80, 0x00};
    out.write(reinterpret_cast<const char*>(bytes), 4);
  }
  auto wide = read_pgm(dir / "wide.pgm");
  CHECK(wide.at(0, 0) == 1.0);
  CHECK(wide.at(1, 0) == doctest::Approx(32768.0 / 65535.0));

  {
    std::ofstream out(dir / "ascii.pgm");
    out << "P2\n3 1\n4\n0 2 4\n";
  }
  auto ascii = read_pgm(dir / "ascii.pgm");
  CHECK(ascii.at(1, 0) == 0.5);
  CHECK_THROWS_AS(read_pgm(dir / "missing.pgm"), Error);
}
