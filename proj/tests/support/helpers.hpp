#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "safe/types.hpp"

namespace safe::testing {

inline std::vector<std::string> make_ids(std::size_t n, const std::string& prefix = "p") {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back(prefix + std::to_string(i));
  return ids;
}

inline FeatureMatrix matrix_from(const std::vector<std::vector<double>>& rows) {
  std::vector<double> values;
  for (const auto& r : rows) values.insert(values.end(), r.begin(), r.end());
  return FeatureMatrix(make_ids(rows.size()), std::move(values), rows.front().size());
}

inline std::vector<std::vector<double>> rows_of(const FeatureMatrix& x) {
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < x.rows(); ++i) out.emplace_back(x.row(i).begin(), x.row(i).end());
  return out;
}

inline std::vector<std::vector<double>> random_points(std::mt19937_64& gen, std::size_t n, std::size_t d,
                                                      double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<std::vector<double>> pts(n, std::vector<double>(d));
  for (auto& p : pts)
    for (auto& v : p) v = u(gen);
  return pts;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("safe_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace safe::testing
