#include "safe/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <sstream>

#include "safe/error.hpp"
#include "safe/parallel.hpp"

namespace safe {

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double diff = a[j] - b[j];
    acc += diff * diff;
  }
  return std::sqrt(acc);
}

DistanceMatrix::DistanceMatrix(const FeatureMatrix& x) : n_(x.rows()), d_(n_ * n_, 0.0) {
  parallel_for(n_, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto a = x.row(i);
      for (std::size_t j = 0; j < n_; ++j) {
        d_[i * n_ + j] = i == j ? 0.0 : euclidean_distance(a, x.row(j));
      }
    }
  });
}

int ClusteringResult::cluster_count() const {
  int count = 0;
  for (int a : assignment) count = std::max(count, a + 1);
  return count;
}

std::string_view to_string(PointRole role) noexcept {
  switch (role) {
    case PointRole::kCore: return "core";
    case PointRole::kBorder: return "border";
    case PointRole::kNoise: return "noise";
  }
  return "noise";
}

std::size_t find_elbow(std::span<const double> distances) {
  const std::size_t n = distances.size();
  if (n < 3) throw Error(ErrorCode::kTooShort, "elbow search needs at least 3 values");
  const std::size_t fallback = (9 * (n - 1)) / 10;
  const double first = distances.front();
  const double range = distances.back() - first;
  if (!(range > 0.0)) return fallback;

  const double last_x = static_cast<double>(n - 1);
  std::size_t best = 0;
  double best_dist = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) / last_x;
    const double y = (distances[i] - first) / range;
    const double perp = std::abs(x - y) / std::sqrt(2.0);
    if (perp > best_dist) {
      best_dist = perp;
      best = i;
    }
  }
  return best_dist < 1e-9 ? fallback : best;
}

KDistanceProfile k_distance_profile(const DistanceMatrix& dist, int k) {
  const std::size_t n = dist.size();
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  if (n <= static_cast<std::size_t>(k)) {
    throw Error(ErrorCode::kTooFewPoints,
                "k-distance needs more than k=" + std::to_string(k) + " points, got " + std::to_string(n));
  }
  const auto kk = static_cast<std::size_t>(k);
  KDistanceProfile profile;
  profile.k = k;
  profile.distances.resize(n);
  std::vector<double> others;
  others.reserve(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    others.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) others.push_back(dist(i, j));
    }
    std::partial_sort(others.begin(), others.begin() + static_cast<std::ptrdiff_t>(kk), others.end());
    double acc = 0.0;
    for (std::size_t j = 0; j < kk; ++j) acc += others[j];
    profile.distances[i] = acc / static_cast<double>(kk);
  }
  std::sort(profile.distances.begin(), profile.distances.end());
  profile.elbow_index = find_elbow(profile.distances);
  profile.epsilon = profile.distances[profile.elbow_index];
  return profile;
}

KDistanceProfile k_distance_profile(const FeatureMatrix& x, int k) {
  return k_distance_profile(DistanceMatrix(x), k);
}

ClusteringResult dbscan(const DistanceMatrix& dist, double eps, int min_pts) {
  const std::size_t n = dist.size();
  if (!(eps > 0.0) || !std::isfinite(eps)) throw Error(ErrorCode::kInvalidArgument, "eps must be > 0");
  if (min_pts < 2 || static_cast<std::size_t>(min_pts) > n) {
    throw Error(ErrorCode::kInvalidArgument,
                "min_pts must lie in [2, n]; got " + std::to_string(min_pts) + " with n=" + std::to_string(n));
  }

  std::vector<std::vector<std::size_t>> neighbours(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = dist.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (row[j] <= eps) neighbours[i].push_back(j);
    }
  }

  ClusteringResult result;
  result.epsilon = eps;
  result.min_pts = min_pts;
  result.assignment.assign(n, kNoise);
  result.role.assign(n, PointRole::kNoise);
  for (std::size_t i = 0; i < n; ++i) {
    if (neighbours[i].size() >= static_cast<std::size_t>(min_pts)) result.role[i] = PointRole::kCore;
  }

  int next_id = 0;
  std::deque<std::size_t> frontier;
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (result.role[seed] != PointRole::kCore || result.assignment[seed] != kNoise) continue;
    const int id = next_id++;
    result.assignment[seed] = id;
    frontier.push_back(seed);
    while (!frontier.empty()) {
      const std::size_t p = frontier.front();
      frontier.pop_front();
      for (std::size_t q : neighbours[p]) {
        if (result.role[q] == PointRole::kCore && result.assignment[q] == kNoise) {
          result.assignment[q] = id;
          frontier.push_back(q);
        }
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (result.role[i] == PointRole::kCore) continue;
    for (std::size_t j : neighbours[i]) {
      if (result.role[j] == PointRole::kCore) {
        result.assignment[i] = result.assignment[j];
        result.role[i] = PointRole::kBorder;
        break;
      }
    }
  }
  return result;
}

ClusteringResult dbscan(const FeatureMatrix& x, double eps, int min_pts) {
  return dbscan(DistanceMatrix(x), eps, min_pts);
}

double silhouette(const DistanceMatrix& dist, std::span<const int> assignment) {
  const std::size_t n = dist.size();
  if (assignment.size() != n) throw Error(ErrorCode::kLengthMismatch, "assignment length differs from n");

  std::map<int, std::size_t> compact;
  for (int a : assignment) {
    if (a >= 0) compact.emplace(a, 0);
  }
  if (compact.size() < 2) {
    throw Error(ErrorCode::kUndefinedSilhouette,
                "silhouette needs at least two clusters, got " + std::to_string(compact.size()));
  }
  std::size_t next = 0;
  for (auto& [label, index] : compact) index = next++;
  const std::size_t k = compact.size();

  std::vector<std::size_t> label(n, k);
  std::vector<double> size(k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (assignment[i] >= 0) {
      label[i] = compact[assignment[i]];
      size[label[i]] += 1.0;
    }
  }

  double total = 0.0;
  std::size_t counted = 0;
  std::vector<double> sums(k);
  for (std::size_t i = 0; i < n; ++i) {
    if (label[i] == k) continue;
    ++counted;
    const std::size_t own = label[i];
    if (size[own] <= 1.0) continue;
    std::fill(sums.begin(), sums.end(), 0.0);
    const auto row = dist.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && label[j] != k) sums[label[j]] += row[j];
    }
    const double a = sums[own] / (size[own] - 1.0);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      if (c != own) b = std::min(b, sums[c] / size[c]);
    }
    const double denom = std::max(a, b);
    if (denom > 0.0) total += (b - a) / denom;
  }
  return total / static_cast<double>(counted);
}

double silhouette(const FeatureMatrix& x, std::span<const int> assignment) {
  return silhouette(DistanceMatrix(x), assignment);
}

MinPtsTuning tune_min_pts(const DistanceMatrix& dist, double eps, SweepRange sweep) {
  const int n = static_cast<int>(dist.size());
  if (sweep.lo < 2 || sweep.hi < sweep.lo) {
    throw Error(ErrorCode::kInvalidArgument, "MinPts sweep must satisfy 2 <= lo <= hi");
  }
  if (sweep.lo > n) {
    throw Error(ErrorCode::kInvalidArgument, "MinPts sweep starts above the point count " + std::to_string(n));
  }
  const int hi = std::min(sweep.hi, n);

  MinPtsTuning best;
  bool found = false;
  double best_score = -std::numeric_limits<double>::infinity();
  for (int mp = sweep.lo; mp <= hi; ++mp) {
    auto result = dbscan(dist, eps, mp);
    SweepEntry entry;
    entry.min_pts = mp;
    entry.clusters = result.cluster_count();
    entry.noise = static_cast<std::size_t>(std::count(result.assignment.begin(), result.assignment.end(), kNoise));
    if (entry.clusters >= 2) {
      const double s = silhouette(dist, result.assignment);
      entry.silhouette = s;
      result.silhouette = s;
      if (!found || s > best_score) {
        found = true;
        best_score = s;
        best.min_pts = mp;
        best.result = std::move(result);
      }
    }
    best.sweep.push_back(entry);
  }
  if (!found) {
    std::ostringstream msg;
    msg << "no MinPts in [" << sweep.lo << ", " << hi << "] yields two or more clusters at eps=" << eps << ";";
    for (const auto& e : best.sweep) msg << " MinPts=" << e.min_pts << ": " << e.clusters << " cluster(s)";
    throw Error(ErrorCode::kNoValidClustering, msg.str());
  }
  return best;
}

MinPtsTuning tune_min_pts(const FeatureMatrix& x, double eps, SweepRange sweep) {
  return tune_min_pts(DistanceMatrix(x), eps, sweep);
}

RootCauseClusterSet to_root_cause_clusters(const ClusteringResult& result,
                                           const std::vector<std::string>& ids) {
  if (ids.size() != result.assignment.size()) {
    throw Error(ErrorCode::kLengthMismatch, "id count differs from clustering size");
  }
  RootCauseClusterSet set;
  set.epsilon = result.epsilon;
  set.min_pts = result.min_pts;
  set.clusters.resize(static_cast<std::size_t>(result.cluster_count()));
  for (std::size_t c = 0; c < set.clusters.size(); ++c) set.clusters[c].id = static_cast<int>(c);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const int a = result.assignment[i];
    if (a == kNoise) continue;
    auto& cluster = set.clusters[static_cast<std::size_t>(a)];
    cluster.member_ids.push_back(ids[i]);
    if (result.role[i] == PointRole::kCore) cluster.core_ids.push_back(ids[i]);
  }
  return set;
}

AutoClusterOutput auto_cluster(const FeatureMatrix& x, const RunConfig& config) {
  config.validate();
  if (x.rows() < static_cast<std::size_t>(config.k_neighbors) + 1) {
    throw Error(ErrorCode::kTooFewPoints, "need at least k+1=" + std::to_string(config.k_neighbors + 1) +
                                              " points, got " + std::to_string(x.rows()));
  }
  const DistanceMatrix dist(x);
  AutoClusterOutput out;
  out.profile = k_distance_profile(dist, config.k_neighbors);

  double eps = out.profile.epsilon;
  if (!(eps > 0.0)) {
    const auto& d = out.profile.distances;
    auto it = std::find_if(d.begin() + static_cast<std::ptrdiff_t>(out.profile.elbow_index), d.end(),
                           [](double v) { return v > 0.0; });
    if (it == d.end()) {
      throw Error(ErrorCode::kNoValidClustering, "all points coincide; the k-distance profile is zero");
    }
    eps = *it;
  }
  out.tuning = tune_min_pts(dist, eps, config.minpts_sweep);
  out.result = out.tuning.result;
  out.clusters = to_root_cause_clusters(out.result, x.ids());
  return out;
}

}  // namespace safe
