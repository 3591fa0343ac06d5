#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace safe {

/// n x m matrix of feature activations, one row per image id.
///
/// Construction validates every invariant (non-empty, rectangular, finite,
/// unique ids, label count), so a FeatureMatrix value is always well formed.
class FeatureMatrix {
 public:
  FeatureMatrix(std::vector<std::string> ids, std::vector<double> values, std::size_t cols,
                std::optional<std::vector<std::string>> labels = std::nullopt);

  std::size_t rows() const noexcept { return ids_.size(); }
  std::size_t cols() const noexcept { return cols_; }

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * cols_, cols_};
  }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }

  const std::vector<std::string>& ids() const noexcept { return ids_; }
  const std::vector<double>& values() const noexcept { return values_; }
  const std::optional<std::vector<std::string>>& labels() const noexcept { return labels_; }

  std::optional<std::size_t> index_of(std::string_view id) const;

  /// Number of distinct labels; 0 when the matrix is unlabeled.
  std::size_t category_count() const;

  /// Rows selected by position, in the given order.
  FeatureMatrix select_rows(std::span<const std::size_t> rows) const;

 private:
  std::vector<std::string> ids_;
  std::vector<double> values_;
  std::size_t cols_;
  std::optional<std::vector<std::string>> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Simulator parameters per image id (gaze angle, head pose, ...).
class ParameterTable {
 public:
  ParameterTable(std::vector<std::string> ids, std::vector<std::string> names,
                 std::vector<double> values);

  std::size_t rows() const noexcept { return ids_.size(); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  const std::vector<std::string>& names() const noexcept { return names_; }

  double value(std::size_t row, std::size_t param) const {
    return values_[row * names_.size() + param];
  }
  std::optional<std::size_t> index_of(std::string_view id) const;
  std::optional<std::size_t> param_index(std::string_view name) const;

 private:
  std::vector<std::string> ids_;
  std::vector<std::string> names_;
  std::vector<double> values_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Mean is close to an unsafe value when it lies within `fraction` of the
/// length of the subrange (between consecutive boundaries) containing it.
struct SubrangeFraction {
  std::vector<double> boundaries;
  double fraction = 0.25;
};

/// Mean is close to an unsafe value when it is below or equal to it.
struct AtMost {};

using ClosenessRule = std::variant<SubrangeFraction, AtMost>;

struct UnsafeEntry {
  std::string param;
  std::vector<double> unsafe_values;
  ClosenessRule rule;
};

struct UnsafeValueSpec {
  std::vector<UnsafeEntry> entries;

  /// Throws Error{kMalformedRule} on the first violated invariant.
  void validate() const;
  std::size_t total_unsafe_values() const;
};

struct SweepRange {
  int lo = 3;
  int hi = 20;
};

struct RunConfig {
  int target_dim = 256;
  int k_neighbors = 4;
  SweepRange minpts_sweep{};
  double selection_factor = 0.3;
  double rr_threshold = 0.5;
  std::uint64_t seed = 0;

  void validate() const;
};

}  // namespace safe
