#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace safe {

double accuracy(std::span<const std::string> predictions, std::span<const std::string> truth);

/// Vargha-Delaney A12: probability that a draw from xs exceeds a draw from
/// ys, ties counting one half.
double vargha_delaney_a12(std::span<const double> xs, std::span<const double> ys);

struct MannWhitneyResult {
  /// U for xs: number of (x, y) pairs with x > y plus half the ties.
  double u = 0.0;
  double z = 0.0;
  double p_value = 1.0;
  /// Every value identical: variance is zero and p is 1 by convention.
  bool degenerate = false;
};

/// Two-sided test, normal approximation with midranks, tie-corrected
/// variance and a 0.5 continuity correction.
MannWhitneyResult mann_whitney_u(std::span<const double> xs, std::span<const double> ys);

struct StatsComparison {
  double a12 = 0.5;
  double u_statistic = 0.0;
  double p_value = 1.0;
  std::size_t n_x = 0;
  std::size_t n_y = 0;
};

StatsComparison compare_samples(std::span<const double> xs, std::span<const double> ys);

}  // namespace safe
