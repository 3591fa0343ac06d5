#include "safe/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "safe/error.hpp"
#include "safe/parallel.hpp"

namespace safe {
namespace {

// Householder reduction of the symmetric matrix held in v (row-major n x n)
// to tridiagonal form. On return d is the diagonal, e the subdiagonal (e[0]
// unused) and v the accumulated orthogonal transform.
void tridiagonalize(std::vector<double>& v, std::vector<double>& d, std::vector<double>& e,
                    std::size_t n) {
  auto V = [&](std::size_t i, std::size_t j) -> double& { return v[i * n + j]; };
  for (std::size_t j = 0; j < n; ++j) d[j] = V(n - 1, j);

  for (std::size_t i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (std::size_t k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (std::size_t j = 0; j < i; ++j) {
        d[j] = V(i - 1, j);
        V(i, j) = 0.0;
        V(j, i) = 0.0;
      }
    } else {
      for (std::size_t k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;

      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        V(j, i) = f;
        g = e[j] + V(j, j) * f;
        for (std::size_t k = j + 1; k <= i - 1; ++k) {
          g += V(k, j) * d[k];
          e[k] += V(k, j) * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (std::size_t k = j; k <= i - 1; ++k) V(k, j) -= (f * e[k] + g * d[k]);
        d[j] = V(i - 1, j);
        V(i, j) = 0.0;
      }
    }
    d[i] = h;
  }

  for (std::size_t i = 0; i + 1 < n; ++i) {
    V(n - 1, i) = V(i, i);
    V(i, i) = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (std::size_t k = 0; k <= i; ++k) d[k] = V(k, i + 1) / h;
      for (std::size_t j = 0; j <= i; ++j) {
        double g = 0.0;
        for (std::size_t k = 0; k <= i; ++k) g += V(k, i + 1) * V(k, j);
        for (std::size_t k = 0; k <= i; ++k) V(k, j) -= g * d[k];
      }
    }
    for (std::size_t k = 0; k <= i; ++k) V(k, i + 1) = 0.0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = V(n - 1, j);
    V(n - 1, j) = 0.0;
  }
  V(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
}

// Implicit QL iteration on the tridiagonal matrix (d, e), accumulating the
// rotations into v.
void tridiagonal_ql(std::vector<double>& v, std::vector<double>& d, std::vector<double>& e,
                    std::size_t n) {
  auto V = [&](std::size_t i, std::size_t j) -> double& { return v[i * n + j]; };
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  double f = 0.0;
  double tst1 = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n) {
      if (std::abs(e[m]) <= eps * tst1) break;
      ++m;
    }
    if (m > l) {
      int iterations = 0;
      do {
        if (++iterations > 200) {
          throw Error(ErrorCode::kDegenerateInput, "eigenvalue iteration did not converge");
        }
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0;
        double c2 = c;
        double c3 = c;
        const double el1 = e[l + 1];
        double s = 0.0;
        double s2 = 0.0;
        for (std::size_t ii = m; ii-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[ii];
          h = c * p;
          r = std::hypot(p, e[ii]);
          e[ii + 1] = s * r;
          s = e[ii] / r;
          c = p / r;
          p = c * d[ii] - s * g;
          d[ii + 1] = h + s * (c * g + s * d[ii]);
          for (std::size_t k = 0; k < n; ++k) {
            h = V(k, ii + 1);
            V(k, ii + 1) = s * V(k, ii) + c * h;
            V(k, ii) = c * V(k, ii) - s * h;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

std::size_t argmax_abs(std::span<const double> v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  }
  return best;
}

}  // namespace

SymmetricEigen symmetric_eigen(std::span<const double> matrix, std::size_t n) {
  if (matrix.size() != n * n) throw Error(ErrorCode::kDimensionMismatch, "matrix is not n x n");
  if (n == 0) return {};
  std::vector<double> v(matrix.begin(), matrix.end());
  std::vector<double> d(n);
  std::vector<double> e(n);
  if (n == 1) return {{v[0]}, {1.0}};
  tridiagonalize(v, d, e, n);
  tridiagonal_ql(v, d, e, n);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  SymmetricEigen out;
  out.values.resize(n);
  out.vectors.resize(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = d[order[k]];
    for (std::size_t i = 0; i < n; ++i) out.vectors[i * n + k] = v[i * n + order[k]];
  }
  return out;
}

std::vector<double> sample_covariance(const FeatureMatrix& x, std::span<const double> mean) {
  const std::size_t n = x.rows();
  const std::size_t m = x.cols();
  std::vector<double> centered(n * m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) centered[i * m + j] = x(i, j) - mean[j];
  }
  std::vector<double> cov(m * m, 0.0);
  const double denom = static_cast<double>(n - 1);
  parallel_for(m, [&](std::size_t begin, std::size_t end) {
    for (std::size_t a = begin; a < end; ++a) {
      for (std::size_t b = a; b < m; ++b) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += centered[i * m + a] * centered[i * m + b];
        cov[a * m + b] = acc / denom;
      }
    }
  });
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < a; ++b) cov[a * m + b] = cov[b * m + a];
  }
  return cov;
}

PcaModel fit_pca(const FeatureMatrix& x, int target_dim) {
  const std::size_t n = x.rows();
  const std::size_t m = x.cols();
  if (n < 2) throw Error(ErrorCode::kDegenerateInput, "PCA needs at least two rows");
  if (target_dim < 1) throw Error(ErrorCode::kInvalidArgument, "target_dim must be >= 1");

  PcaModel model;
  model.mean.assign(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) model.mean[j] += x(i, j);
  }
  for (double& v : model.mean) v /= static_cast<double>(n);

  const auto cov = sample_covariance(x, model.mean);
  for (std::size_t j = 0; j < m; ++j) model.total_variance += cov[j * m + j];

  const auto eig = symmetric_eigen(cov, m);

  struct Candidate {
    double value;
    std::size_t lead;
    std::vector<double> vec;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(m);
  for (std::size_t k = m; k-- > 0;) {
    Candidate c{std::max(0.0, eig.values[k]), 0, std::vector<double>(m)};
    for (std::size_t i = 0; i < m; ++i) c.vec[i] = eig.vectors[i * m + k];
    c.lead = argmax_abs(c.vec);
    if (c.vec[c.lead] < 0) {
      for (double& v : c.vec) v = -v;
    }
    candidates.push_back(std::move(c));
  }
  // Descending by eigenvalue; numerically tied eigenvalues ordered by the
  // index of their leading coordinate.
  const double scale = std::max(1.0, candidates.empty() ? 0.0 : candidates.front().value);
  const double tie_tol = 1e-12 * scale;
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.value > b.value; });
  for (std::size_t begin = 0; begin < candidates.size();) {
    std::size_t end = begin + 1;
    while (end < candidates.size() && candidates[end - 1].value - candidates[end].value <= tie_tol) ++end;
    std::stable_sort(candidates.begin() + static_cast<std::ptrdiff_t>(begin),
                     candidates.begin() + static_cast<std::ptrdiff_t>(end),
                     [](const Candidate& a, const Candidate& b) { return a.lead < b.lead; });
    begin = end;
  }

  const std::size_t t = std::min({static_cast<std::size_t>(target_dim), n - 1, m});
  model.components.reserve(t * m);
  model.explained_variance.reserve(t);
  for (std::size_t k = 0; k < t; ++k) {
    model.components.insert(model.components.end(), candidates[k].vec.begin(), candidates[k].vec.end());
    model.explained_variance.push_back(candidates[k].value);
  }
  return model;
}

FeatureMatrix pca_transform(const PcaModel& model, const FeatureMatrix& x) {
  const std::size_t m = model.input_dim();
  const std::size_t t = model.output_dim();
  if (x.cols() != m) {
    throw Error(ErrorCode::kDimensionMismatch, "model expects " + std::to_string(m) +
                                                   " features, input has " + std::to_string(x.cols()));
  }
  std::vector<double> out(x.rows() * t);
  parallel_for(x.rows(), [&](std::size_t begin, std::size_t end) {
    std::vector<double> centered(m);
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = 0; j < m; ++j) centered[j] = x(i, j) - model.mean[j];
      for (std::size_t k = 0; k < t; ++k) {
        const auto comp = model.component(k);
        double acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) acc += centered[j] * comp[j];
        out[i * t + k] = acc;
      }
    }
  });
  return FeatureMatrix(x.ids(), std::move(out), t, x.labels());
}

FeatureMatrix pca_inverse_transform(const PcaModel& model, const FeatureMatrix& y) {
  const std::size_t m = model.input_dim();
  const std::size_t t = model.output_dim();
  if (y.cols() != t) throw Error(ErrorCode::kDimensionMismatch, "reduced input has wrong width");
  std::vector<double> out(y.rows() * m);
  for (std::size_t i = 0; i < y.rows(); ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      double acc = model.mean[j];
      for (std::size_t k = 0; k < t; ++k) acc += y(i, k) * model.components[k * m + j];
      out[i * m + j] = acc;
    }
  }
  return FeatureMatrix(y.ids(), std::move(out), m, y.labels());
}

std::vector<double> explained_variance_ratio(const PcaModel& model) {
  const bool all_zero = std::all_of(model.explained_variance.begin(), model.explained_variance.end(),
                                    [](double v) { return v <= 0.0; });
  if (all_zero || !(model.total_variance > 0.0)) {
    throw Error(ErrorCode::kZeroVariance, "every principal component has zero variance");
  }
  std::vector<double> ratios;
  ratios.reserve(model.output_dim());
  for (double v : model.explained_variance) ratios.push_back(v / model.total_variance);
  return ratios;
}

}  // namespace safe
