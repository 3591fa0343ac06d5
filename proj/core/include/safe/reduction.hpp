#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "safe/types.hpp"

namespace safe {

/// Fitted principal components.
///
/// `components` holds t rows of length m (row-major), pairwise orthonormal,
/// ordered by non-increasing explained variance. Each row's largest-magnitude
/// coordinate is positive.
struct PcaModel {
  std::vector<double> mean;
  std::vector<double> components;
  std::vector<double> explained_variance;
  /// Trace of the sample covariance (sum of all eigenvalues, retained or not).
  double total_variance = 0.0;

  std::size_t input_dim() const noexcept { return mean.size(); }
  std::size_t output_dim() const noexcept { return explained_variance.size(); }
  std::span<const double> component(std::size_t k) const {
    return {components.data() + k * input_dim(), input_dim()};
  }
};

/// Eigen-decomposition of a dense symmetric matrix (Householder reduction to
/// tridiagonal form followed by the implicit QL iteration).
struct SymmetricEigen {
  /// Ascending eigenvalues.
  std::vector<double> values;
  /// Column k of the row-major n x n matrix is the eigenvector of values[k].
  std::vector<double> vectors;
};
SymmetricEigen symmetric_eigen(std::span<const double> matrix, std::size_t n);

/// Sample covariance (denominator n-1) of the rows of X, m x m row-major.
std::vector<double> sample_covariance(const FeatureMatrix& x, std::span<const double> mean);

PcaModel fit_pca(const FeatureMatrix& x, int target_dim);
FeatureMatrix pca_transform(const PcaModel& model, const FeatureMatrix& x);
/// Maps reduced coordinates back into the input space (mean + Y C).
FeatureMatrix pca_inverse_transform(const PcaModel& model, const FeatureMatrix& y);
std::vector<double> explained_variance_ratio(const PcaModel& model);

}  // namespace safe
