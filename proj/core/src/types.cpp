#include "safe/types.hpp"

#include <cmath>
#include <set>

#include "safe/error.hpp"

namespace safe {

FeatureMatrix::FeatureMatrix(std::vector<std::string> ids, std::vector<double> values,
                             std::size_t cols, std::optional<std::vector<std::string>> labels)
    : ids_(std::move(ids)), values_(std::move(values)), cols_(cols), labels_(std::move(labels)) {
  if (ids_.empty()) throw Error(ErrorCode::kEmptyFile, "feature matrix has no rows");
  if (cols_ == 0) throw Error(ErrorCode::kEmptyFile, "feature matrix has no columns");
  if (values_.size() != ids_.size() * cols_) {
    throw Error(ErrorCode::kRaggedRow, "value count " + std::to_string(values_.size()) +
                                           " is not rows x cols = " + std::to_string(ids_.size()) +
                                           " x " + std::to_string(cols_));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(ErrorCode::kNonFiniteValue,
                  "row '" + ids_[i / cols_] + "' column " + std::to_string(i % cols_));
    }
  }
  if (labels_ && labels_->size() != ids_.size()) {
    throw Error(ErrorCode::kRaggedRow, "label count does not match row count");
  }
  index_.reserve(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (!index_.emplace(ids_[i], i).second) {
      throw Error(ErrorCode::kDuplicateId, "id '" + ids_[i] + "'");
    }
  }
}

std::optional<std::size_t> FeatureMatrix::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t FeatureMatrix::category_count() const {
  if (!labels_) return 0;
  return std::set<std::string>(labels_->begin(), labels_->end()).size();
}

FeatureMatrix FeatureMatrix::select_rows(std::span<const std::size_t> rows) const {
  std::vector<std::string> ids;
  std::vector<double> values;
  std::optional<std::vector<std::string>> labels;
  if (labels_) labels.emplace();
  ids.reserve(rows.size());
  values.reserve(rows.size() * cols_);
  for (std::size_t r : rows) {
    ids.push_back(ids_.at(r));
    auto src = row(r);
    values.insert(values.end(), src.begin(), src.end());
    if (labels_) labels->push_back((*labels_)[r]);
  }
  return FeatureMatrix(std::move(ids), std::move(values), cols_, std::move(labels));
}

ParameterTable::ParameterTable(std::vector<std::string> ids, std::vector<std::string> names,
                               std::vector<double> values)
    : ids_(std::move(ids)), names_(std::move(names)), values_(std::move(values)) {
  if (values_.size() != ids_.size() * names_.size()) {
    throw Error(ErrorCode::kMissingParameter, "parameter table is not rectangular");
  }
  std::set<std::string> seen_names;
  for (const auto& name : names_) {
    if (!seen_names.insert(name).second) {
      throw Error(ErrorCode::kParseError, "duplicate parameter column '" + name + "'");
    }
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(ErrorCode::kNonFiniteValue, "id '" + ids_[i / names_.size()] + "' parameter '" +
                                                  names_[i % names_.size()] + "'");
    }
  }
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (!index_.emplace(ids_[i], i).second) {
      throw Error(ErrorCode::kDuplicateId, "id '" + ids_[i] + "'");
    }
  }
}

std::optional<std::size_t> ParameterTable::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> ParameterTable::param_index(std::string_view name) const {
  for (std::size_t j = 0; j < names_.size(); ++j) {
    if (names_[j] == name) return j;
  }
  return std::nullopt;
}

void UnsafeValueSpec::validate() const {
  std::set<std::string> seen;
  for (const auto& entry : entries) {
    if (!seen.insert(entry.param).second) {
      throw Error(ErrorCode::kMalformedRule, "parameter '" + entry.param + "' listed twice");
    }
    if (entry.unsafe_values.empty()) {
      throw Error(ErrorCode::kMalformedRule, "parameter '" + entry.param + "' has no unsafe values");
    }
    for (double v : entry.unsafe_values) {
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kMalformedRule, "non-finite unsafe value for '" + entry.param + "'");
      }
    }
    if (const auto* sub = std::get_if<SubrangeFraction>(&entry.rule)) {
      if (sub->boundaries.size() < 2) {
        throw Error(ErrorCode::kMalformedRule,
                    "'" + entry.param + "': subrange rule needs at least two boundaries");
      }
      for (std::size_t i = 0; i < sub->boundaries.size(); ++i) {
        if (!std::isfinite(sub->boundaries[i]) ||
            (i > 0 && !(sub->boundaries[i - 1] < sub->boundaries[i]))) {
          throw Error(ErrorCode::kMalformedRule,
                      "'" + entry.param + "': boundaries must be strictly ascending");
        }
      }
      if (!(sub->fraction > 0.0 && sub->fraction <= 1.0)) {
        throw Error(ErrorCode::kMalformedRule,
                    "'" + entry.param + "': fraction must lie in (0, 1]");
      }
    }
  }
}

std::size_t UnsafeValueSpec::total_unsafe_values() const {
  std::size_t total = 0;
  for (const auto& entry : entries) total += entry.unsafe_values.size();
  return total;
}

void RunConfig::validate() const {
  if (target_dim < 1) throw Error(ErrorCode::kInvalidArgument, "target_dim must be >= 1");
  if (k_neighbors < 1) throw Error(ErrorCode::kInvalidArgument, "k_neighbors must be >= 1");
  if (minpts_sweep.lo < 2 || minpts_sweep.hi < minpts_sweep.lo) {
    throw Error(ErrorCode::kInvalidArgument, "MinPts sweep must satisfy 2 <= lo <= hi");
  }
  if (!(selection_factor >= 0.0 && selection_factor <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "selection factor must lie in [0, 1]");
  }
  if (!std::isfinite(rr_threshold)) {
    throw Error(ErrorCode::kInvalidArgument, "rr_threshold must be finite");
  }
}

}  // namespace safe
