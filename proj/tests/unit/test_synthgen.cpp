#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "safe/error.hpp"
#include "safe/synthgen.hpp"

using namespace safe;

TEST_CASE("three-blob preset sizes") {
  auto [spec, unsafe] = three_blob_preset(512, 300, 0.05, 4);
  CHECK(spec.noise_count == 15);
  for (const auto& b : spec.blobs) CHECK(b.count == 95);
  CHECK(unsafe.total_unsafe_values() == 6);
  auto ds = generate(spec);
  CHECK(ds.features.rows() == 300);
  CHECK(ds.features.cols() == 512);
  CHECK(ds.params.rows() == 300);
  CHECK(ds.params.names().size() == 3);
  CHECK(std::count(ds.truth.begin(), ds.truth.end(), kNoiseLabel) == 15);
}

TEST_CASE("generation is seeded") {
  auto [spec, unsafe] = three_blob_preset(16, 60, 0.1, 7);
  auto a = generate(spec);
  auto b = generate(spec);
  CHECK(a.features.values() == b.features.values());
  spec.seed = 8;
  auto c = generate(spec);
  CHECK(a.features.values() != c.features.values());
}

TEST_CASE("blob members stay near their center") {
  auto [spec, unsafe] = three_blob_preset(8, 150, 0.0, 3);
  auto ds = generate(spec);
  for (std::size_t i = 0; i < ds.features.rows(); ++i) {
    const int b = ds.truth[i];
    REQUIRE(b >= 0);
    double d2 = 0;
    for (std::size_t j = 0; j < 8; ++j) {
      const double c = j == std::size_t(b) ? 20.0 : 0.0;
      d2 += (ds.features(i, j) - c) * (ds.features(i, j) - c);
    }
    CHECK(std::sqrt(d2) < 6 * 0.5 * std::sqrt(8.0));
  }
}

TEST_CASE("separability is enforced") {
  SynthSpec spec;
  spec.feature_dim = 2;
  spec.blobs.push_back({{0, 0}, 1.0, 5, {}});
  spec.blobs.push_back({{5, 0}, 1.0, 5, {}});
  try {
    spec.validate();
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSeparabilityViolation);
  }
  spec.blobs[1].center = {6, 0};
  CHECK_NOTHROW(spec.validate());
}

TEST_CASE("spec json round trip") {
  auto [spec, unsafe] = three_blob_preset(4, 30, 0.1, 2);
  auto text = dump_synth_spec(spec);
  auto back = parse_synth_spec(text);
  CHECK(dump_synth_spec(back) == text);
  CHECK(generate(back).features.values() == generate(spec).features.values());
  CHECK_THROWS_AS(parse_synth_spec("{\"blobs\": []}"), Error);
}
