#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "safe/clustering.hpp"
#include "safe/types.hpp"

namespace safe {

struct ParameterReduction {
  std::string param;
  /// 1 - cluster_variance / global_variance; 0 when global_variance is 0.
  double rr = 0.0;
  double cluster_mean = 0.0;
  double global_variance = 0.0;
  double cluster_variance = 0.0;
};

struct ClusterReduction {
  int cluster_id = 0;
  std::size_t size = 0;
  /// Singleton clusters reduce variance trivially (rr = 1).
  bool singleton = false;
  std::vector<ParameterReduction> params;

  const ParameterReduction* find(const std::string& param) const;
};

struct VarianceReport {
  std::vector<ClusterReduction> clusters;
};

struct Witness {
  std::string param;
  double unsafe_value = 0.0;
  double cluster_mean = 0.0;
  double rr = 0.0;
};

struct ClusterVerdict {
  int cluster_id = 0;
  bool explanatory = false;
  std::vector<Witness> witnesses;
};

struct ExplanatoryVerdict {
  std::vector<ClusterVerdict> clusters;

  std::size_t explanatory_count() const;
};

struct UnsafeValueRef {
  std::string param;
  double value = 0.0;

  friend bool operator==(const UnsafeValueRef&, const UnsafeValueRef&) = default;
};

struct CoverageReport {
  std::vector<UnsafeValueRef> covered;
  std::vector<UnsafeValueRef> total;

  std::size_t coverage_count() const noexcept { return covered.size(); }
};

struct HistogramBin {
  double threshold = 0.0;
  double percentage = 0.0;
};

/// Population variances (denominator n). The global reference is computed
/// over `error_set_ids`; every member and error-set id must be in `table`.
VarianceReport variance_reduction(const RootCauseClusterSet& clusters, const ParameterTable& table,
                                  const std::vector<std::string>& error_set_ids);

std::vector<double> default_histogram_thresholds();

/// Percentage of clusters with at least one parameter whose rr exceeds each
/// threshold (thresholds as fractions: 0.0, 0.1, ..., 0.9).
std::vector<HistogramBin> reduction_histogram(const VarianceReport& report,
                                              const std::vector<double>& thresholds = default_histogram_thresholds());

/// Subrange containing `mean` under [lo, hi) intervals (the last interval is
/// closed). Returns its length, or a negative value when mean lies outside.
double containing_subrange_length(const SubrangeFraction& rule, double mean);
bool is_close(const ClosenessRule& rule, double mean, double unsafe_value);

ExplanatoryVerdict explanatory_clusters(const VarianceReport& report, const UnsafeValueSpec& spec,
                                        double rr_threshold = 0.5);

CoverageReport unsafe_value_coverage(const ExplanatoryVerdict& verdict, const UnsafeValueSpec& spec);

/// (k * 5) * 100 / n truncated to two decimals, as exact integer hundredths.
long inspection_ratio_hundredths(long cluster_count, long error_count);
double inspection_ratio(long cluster_count, long error_count);

}  // namespace safe
