#include "safe/evalstats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "safe/error.hpp"

namespace safe {

double accuracy(std::span<const std::string> predictions, std::span<const std::string> truth) {
  if (predictions.size() != truth.size()) {
    throw Error(ErrorCode::kLengthMismatch, std::to_string(predictions.size()) + " predictions vs " +
                                                std::to_string(truth.size()) + " labels");
  }
  if (truth.empty()) throw Error(ErrorCode::kEmptySample, "accuracy of an empty sample");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += predictions[i] == truth[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

double vargha_delaney_a12(std::span<const double> xs, std::span<const double> ys) {
  if (xs.empty() || ys.empty()) throw Error(ErrorCode::kEmptySample, "A12 needs two non-empty samples");
  double wins = 0.0;
  for (double x : xs) {
    for (double y : ys) {
      if (x > y) {
        wins += 1.0;
      } else if (x == y) {
        wins += 0.5;
      }
    }
  }
  return wins / (static_cast<double>(xs.size()) * static_cast<double>(ys.size()));
}

MannWhitneyResult mann_whitney_u(std::span<const double> xs, std::span<const double> ys) {
  if (xs.empty() || ys.empty()) throw Error(ErrorCode::kEmptySample, "Mann-Whitney needs two non-empty samples");
  const std::size_t n1 = xs.size();
  const std::size_t n2 = ys.size();
  const std::size_t n = n1 + n2;

  struct Obs {
    double value;
    bool first;
  };
  std::vector<Obs> pooled;
  pooled.reserve(n);
  for (double x : xs) pooled.push_back({x, true});
  for (double y : ys) pooled.push_back({y, false});
  std::sort(pooled.begin(), pooled.end(), [](const Obs& a, const Obs& b) { return a.value < b.value; });

  double rank_sum_x = 0.0;
  double tie_term = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && pooled[j].value == pooled[i].value) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (pooled[k].first) rank_sum_x += midrank;
    }
    const double t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    i = j;
  }

  const double dn1 = static_cast<double>(n1);
  const double dn2 = static_cast<double>(n2);
  const double dn = static_cast<double>(n);
  MannWhitneyResult r;
  r.u = rank_sum_x - dn1 * (dn1 + 1.0) / 2.0;
  const double mean = dn1 * dn2 / 2.0;
  const double variance = n > 1 ? dn1 * dn2 / 12.0 * ((dn + 1.0) - tie_term / (dn * (dn - 1.0))) : 0.0;
  if (!(variance > 0.0)) {
    r.degenerate = true;
    r.p_value = 1.0;
    return r;
  }
  const double corrected = std::max(0.0, std::abs(r.u - mean) - 0.5);
  r.z = corrected / std::sqrt(variance);
  r.p_value = std::clamp(std::erfc(r.z / std::sqrt(2.0)), 0.0, 1.0);
  return r;
}

StatsComparison compare_samples(std::span<const double> xs, std::span<const double> ys) {
  StatsComparison c;
  c.a12 = vargha_delaney_a12(xs, ys);
  const auto mw = mann_whitney_u(xs, ys);
  c.u_statistic = mw.u;
  c.p_value = mw.p_value;
  c.n_x = xs.size();
  c.n_y = ys.size();
  return c;
}

}  // namespace safe
