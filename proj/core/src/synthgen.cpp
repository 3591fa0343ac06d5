#include "safe/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <nlohmann/json.hpp>
#include <sstream>

#include "safe/clustering.hpp"
#include "safe/error.hpp"
#include "safe/random.hpp"

namespace safe {
namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<double> padded_center(const BlobSpec& blob, std::size_t dim) {
  std::vector<double> c(dim, 0.0);
  std::copy(blob.center.begin(), blob.center.end(), c.begin());
  return c;
}

std::string make_id(const std::string& prefix, std::size_t i) {
  std::ostringstream ss;
  ss << prefix << std::setw(5) << std::setfill('0') << i;
  return ss.str();
}

}  // namespace

void SynthSpec::validate() const {
  if (feature_dim == 0) throw Error(ErrorCode::kInvalidArgument, "feature_dim must be >= 1");
  if (blobs.empty()) throw Error(ErrorCode::kInvalidArgument, "at least one blob is required");
  std::size_t total = noise_count;
  double max_spread = 0.0;
  for (std::size_t b = 0; b < blobs.size(); ++b) {
    const auto& blob = blobs[b];
    if (blob.center.size() > feature_dim) {
      throw Error(ErrorCode::kInvalidArgument, "blob " + std::to_string(b) + " center exceeds feature_dim");
    }
    if (!(blob.spread > 0.0) || !std::isfinite(blob.spread)) {
      throw Error(ErrorCode::kInvalidArgument, "blob " + std::to_string(b) + " spread must be > 0");
    }
    if (blob.params.size() != blobs.front().params.size()) {
      throw Error(ErrorCode::kInvalidArgument, "every blob must plant the same parameters");
    }
    for (std::size_t p = 0; p < blob.params.size(); ++p) {
      if (blob.params[p].name != blobs.front().params[p].name) {
        throw Error(ErrorCode::kInvalidArgument, "every blob must plant the same parameters in the same order");
      }
      if (!(blob.params[p].spread >= 0.0) || !std::isfinite(blob.params[p].center)) {
        throw Error(ErrorCode::kInvalidArgument, "parameter '" + blob.params[p].name + "' is malformed");
      }
    }
    max_spread = std::max(max_spread, blob.spread);
    total += blob.count;
  }
  if (total == 0) throw Error(ErrorCode::kInvalidArgument, "spec generates no points");
  for (std::size_t a = 0; a < blobs.size(); ++a) {
    for (std::size_t b = a + 1; b < blobs.size(); ++b) {
      const double d = euclidean_distance(padded_center(blobs[a], feature_dim), padded_center(blobs[b], feature_dim));
      if (d < 6.0 * max_spread) {
        throw Error(ErrorCode::kSeparabilityViolation, "blobs " + std::to_string(a) + " and " + std::to_string(b) +
                                                           " are " + std::to_string(d) + " apart, need >= " +
                                                           std::to_string(6.0 * max_spread));
      }
    }
  }
}

SynthDataset generate(const SynthSpec& spec) {
  spec.validate();
  const std::size_t dim = spec.feature_dim;
  const std::size_t nparams = spec.blobs.front().params.size();
  Rng rng(spec.seed);

  std::vector<std::string> ids;
  std::vector<double> features;
  std::vector<double> params;
  std::vector<int> truth;

  double max_spread = 0.0;
  std::vector<double> box_lo(dim, std::numeric_limits<double>::infinity());
  std::vector<double> box_hi(dim, -std::numeric_limits<double>::infinity());
  std::vector<double> param_lo(nparams, std::numeric_limits<double>::infinity());
  std::vector<double> param_hi(nparams, -std::numeric_limits<double>::infinity());

  for (std::size_t b = 0; b < spec.blobs.size(); ++b) {
    const auto& blob = spec.blobs[b];
    const auto center = padded_center(blob, dim);
    max_spread = std::max(max_spread, blob.spread);
    for (std::size_t j = 0; j < dim; ++j) {
      box_lo[j] = std::min(box_lo[j], center[j]);
      box_hi[j] = std::max(box_hi[j], center[j]);
    }
    for (std::size_t p = 0; p < nparams; ++p) {
      param_lo[p] = std::min(param_lo[p], blob.params[p].center);
      param_hi[p] = std::max(param_hi[p], blob.params[p].center);
    }
    for (std::size_t i = 0; i < blob.count; ++i) {
      ids.push_back(make_id("b" + std::to_string(b) + "_", i));
      for (std::size_t j = 0; j < dim; ++j) features.push_back(center[j] + blob.spread * rng.normal());
      for (const auto& p : blob.params) params.push_back(p.center + p.spread * rng.normal());
      truth.push_back(static_cast<int>(b));
    }
  }

  const double margin = 3.0 * max_spread;
  for (std::size_t i = 0; i < spec.noise_count; ++i) {
    ids.push_back(make_id("noise_", i));
    for (std::size_t j = 0; j < dim; ++j) features.push_back(rng.uniform(box_lo[j] - margin, box_hi[j] + margin));
    for (std::size_t p = 0; p < nparams; ++p) params.push_back(rng.uniform(param_lo[p], param_hi[p]));
    truth.push_back(kNoiseLabel);
  }

  std::vector<std::string> names;
  for (const auto& p : spec.blobs.front().params) names.push_back(p.name);
  ParameterTable table(ids, std::move(names), std::move(params));
  FeatureMatrix matrix(std::move(ids), std::move(features), dim);
  return {std::move(matrix), std::move(table), std::move(truth)};
}

SynthSpec parse_synth_spec(const std::string& json_text) {
  ordered_json root;
  try {
    root = ordered_json::parse(json_text);
    SynthSpec spec;
    spec.feature_dim = root.at("feature_dim").get<std::size_t>();
    spec.noise_count = root.value("noise_count", std::size_t{0});
    spec.seed = root.value("seed", std::uint64_t{0});
    for (const auto& b : root.at("blobs")) {
      BlobSpec blob;
      blob.center = b.at("center").get<std::vector<double>>();
      blob.spread = b.at("spread").get<double>();
      blob.count = b.at("count").get<std::size_t>();
      if (b.contains("params")) {
        for (const auto& [name, p] : b["params"].items()) {
          blob.params.push_back({name, p.at("center").get<double>(), p.value("spread", 0.0)});
        }
      }
      spec.blobs.push_back(std::move(blob));
    }
    spec.validate();
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("synth spec: ") + e.what());
  }
}

std::string dump_synth_spec(const SynthSpec& spec) {
  ordered_json root;
  root["feature_dim"] = spec.feature_dim;
  root["noise_count"] = spec.noise_count;
  root["seed"] = spec.seed;
  root["blobs"] = ordered_json::array();
  for (const auto& blob : spec.blobs) {
    ordered_json b;
    b["center"] = blob.center;
    b["spread"] = blob.spread;
    b["count"] = blob.count;
    b["params"] = ordered_json::object();
    for (const auto& p : blob.params) b["params"][p.name] = {{"center", p.center}, {"spread", p.spread}};
    root["blobs"].push_back(std::move(b));
  }
  return root.dump(2) + "\n";
}

std::pair<SynthSpec, UnsafeValueSpec> three_blob_preset(std::size_t dim, std::size_t points, double noise_fraction,
                                                        std::uint64_t seed) {
  if (dim < 3) throw Error(ErrorCode::kInvalidArgument, "three-blob preset needs dim >= 3");
  if (!(noise_fraction >= 0.0 && noise_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "noise fraction must lie in [0, 1)");
  }
  const auto noise = static_cast<std::size_t>(std::llround(static_cast<double>(points) * noise_fraction));
  const std::size_t per_blob = (points - noise) / 3;

  const double gaze[3] = {22.5, 157.5, 292.5};
  const double head[3] = {160.0, 190.0, 220.0};
  const double pupil[3] = {-25.0, 5.0, 10.0};

  SynthSpec spec;
  spec.feature_dim = dim;
  spec.noise_count = points - 3 * per_blob;
  spec.seed = seed;
  for (std::size_t b = 0; b < 3; ++b) {
    BlobSpec blob;
    blob.center.assign(b + 1, 0.0);
    blob.center[b] = 20.0;
    blob.spread = 0.5;
    blob.count = per_blob;
    blob.params = {{"GazeAngle", gaze[b], 2.0}, {"H_Headpose", head[b], 1.5}, {"PupilToBottom", pupil[b], 1.0}};
    spec.blobs.push_back(std::move(blob));
  }

  UnsafeValueSpec unsafe;
  SubrangeFraction octants;
  for (int i = 0; i <= 8; ++i) octants.boundaries.push_back(45.0 * i);
  unsafe.entries.push_back({"GazeAngle", {22.5, 157.5, 292.5}, octants});
  unsafe.entries.push_back({"H_Headpose", {160.0, 220.0}, SubrangeFraction{{145.0, 175.0, 205.0, 235.0}, 0.25}});
  unsafe.entries.push_back({"PupilToBottom", {-16.0}, AtMost{}});
  return {std::move(spec), std::move(unsafe)};
}

}  // namespace safe
