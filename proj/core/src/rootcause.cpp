#include "safe/rootcause.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <set>

#include "safe/error.hpp"

namespace safe {
namespace {

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

// Values are sorted first so the result does not depend on member order.
Moments population_moments(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  Moments m;
  if (values.empty()) return m;
  double sum = 0.0;
  for (double v : values) sum += v;
  m.mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - m.mean) * (v - m.mean);
  m.variance = sq / static_cast<double>(values.size());
  return m;
}

std::vector<std::size_t> rows_for(const ParameterTable& table, const std::vector<std::string>& ids,
                                  const std::string& what) {
  std::vector<std::size_t> rows;
  rows.reserve(ids.size());
  for (const auto& id : ids) {
    auto r = table.index_of(id);
    if (!r) throw Error(ErrorCode::kMissingParameter, what + " id '" + id + "' is not in the parameter table");
    rows.push_back(*r);
  }
  return rows;
}

std::vector<double> column(const ParameterTable& table, const std::vector<std::size_t>& rows, std::size_t p) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (std::size_t r : rows) out.push_back(table.value(r, p));
  return out;
}

}  // namespace

const ParameterReduction* ClusterReduction::find(const std::string& param) const {
  for (const auto& p : params) {
    if (p.param == param) return &p;
  }
  return nullptr;
}

std::size_t ExplanatoryVerdict::explanatory_count() const {
  return static_cast<std::size_t>(
      std::count_if(clusters.begin(), clusters.end(), [](const ClusterVerdict& c) { return c.explanatory; }));
}

VarianceReport variance_reduction(const RootCauseClusterSet& clusters, const ParameterTable& table,
                                  const std::vector<std::string>& error_set_ids) {
  const auto global_rows = rows_for(table, error_set_ids, "error-set");
  const std::size_t params = table.names().size();
  std::vector<Moments> global(params);
  for (std::size_t p = 0; p < params; ++p) global[p] = population_moments(column(table, global_rows, p));

  VarianceReport report;
  report.clusters.reserve(clusters.clusters.size());
  for (const auto& cluster : clusters.clusters) {
    const auto rows = rows_for(table, cluster.member_ids, "cluster member");
    ClusterReduction cr;
    cr.cluster_id = cluster.id;
    cr.size = rows.size();
    cr.singleton = rows.size() == 1;
    for (std::size_t p = 0; p < params; ++p) {
      const auto local = population_moments(column(table, rows, p));
      ParameterReduction pr;
      pr.param = table.names()[p];
      pr.cluster_mean = local.mean;
      pr.cluster_variance = local.variance;
      pr.global_variance = global[p].variance;
      pr.rr = global[p].variance > 0.0 ? 1.0 - local.variance / global[p].variance : 0.0;
      cr.params.push_back(std::move(pr));
    }
    report.clusters.push_back(std::move(cr));
  }
  return report;
}

std::vector<double> default_histogram_thresholds() {
  std::vector<double> t;
  for (int i = 0; i <= 9; ++i) t.push_back(i / 10.0);
  return t;
}

std::vector<HistogramBin> reduction_histogram(const VarianceReport& report, const std::vector<double>& thresholds) {
  if (report.clusters.empty()) throw Error(ErrorCode::kInvalidArgument, "variance report has no clusters");
  std::vector<double> best;
  best.reserve(report.clusters.size());
  for (const auto& c : report.clusters) {
    double b = -std::numeric_limits<double>::infinity();
    for (const auto& p : c.params) b = std::max(b, p.rr);
    best.push_back(b);
  }
  std::vector<HistogramBin> bins;
  for (double t : thresholds) {
    const auto above = std::count_if(best.begin(), best.end(), [t](double b) { return b > t; });
    bins.push_back({t, 100.0 * static_cast<double>(above) / static_cast<double>(best.size())});
  }
  return bins;
}

double containing_subrange_length(const SubrangeFraction& rule, double mean) {
  const auto& b = rule.boundaries;
  if (b.size() < 2 || mean < b.front() || mean > b.back()) return -1.0;
  // upper_bound gives the first boundary strictly above mean, so a mean on an
  // interior boundary falls in the interval starting there.
  auto it = std::upper_bound(b.begin(), b.end(), mean);
  if (it == b.end()) it = std::prev(b.end());
  return *it - *std::prev(it);
}

bool is_close(const ClosenessRule& rule, double mean, double unsafe_value) {
  if (const auto* sub = std::get_if<SubrangeFraction>(&rule)) {
    const double len = containing_subrange_length(*sub, mean);
    if (len < 0.0) return false;
    return std::abs(mean - unsafe_value) <= sub->fraction * len;
  }
  return mean <= unsafe_value;
}

ExplanatoryVerdict explanatory_clusters(const VarianceReport& report, const UnsafeValueSpec& spec,
                                        double rr_threshold) {
  ExplanatoryVerdict verdict;
  for (const auto& cluster : report.clusters) {
    ClusterVerdict cv;
    cv.cluster_id = cluster.cluster_id;
    for (const auto& entry : spec.entries) {
      const auto* pr = cluster.find(entry.param);
      if (!pr) {
        throw Error(ErrorCode::kUnknownParameter, "spec parameter '" + entry.param + "' is not in the report");
      }
      if (!(pr->rr > rr_threshold)) continue;
      for (double value : entry.unsafe_values) {
        if (is_close(entry.rule, pr->cluster_mean, value)) {
          cv.witnesses.push_back({entry.param, value, pr->cluster_mean, pr->rr});
        }
      }
    }
    cv.explanatory = !cv.witnesses.empty();
    verdict.clusters.push_back(std::move(cv));
  }
  return verdict;
}

CoverageReport unsafe_value_coverage(const ExplanatoryVerdict& verdict, const UnsafeValueSpec& spec) {
  CoverageReport report;
  for (const auto& entry : spec.entries) {
    for (double value : entry.unsafe_values) {
      UnsafeValueRef ref{entry.param, value};
      report.total.push_back(ref);
      const bool hit = std::any_of(verdict.clusters.begin(), verdict.clusters.end(), [&](const ClusterVerdict& c) {
        return std::any_of(c.witnesses.begin(), c.witnesses.end(), [&](const Witness& w) {
          return w.param == entry.param && w.unsafe_value == value;
        });
      });
      if (hit) report.covered.push_back(ref);
    }
  }
  return report;
}

long inspection_ratio_hundredths(long cluster_count, long error_count) {
  if (error_count < 1) throw Error(ErrorCode::kInvalidArgument, "error count must be >= 1");
  if (cluster_count < 0) throw Error(ErrorCode::kInvalidArgument, "cluster count must be >= 0");
  return cluster_count * 5 * 100 * 100 / error_count;
}

double inspection_ratio(long cluster_count, long error_count) {
  return static_cast<double>(inspection_ratio_hundredths(cluster_count, error_count)) / 100.0;
}

}  // namespace safe
