#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "safe/types.hpp"

namespace safe {

/// Dense symmetric matrix of euclidean distances between the rows of X.
class DistanceMatrix {
 public:
  explicit DistanceMatrix(const FeatureMatrix& x);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const { return {d_.data() + i * n_, n_}; }

 private:
  std::size_t n_;
  std::vector<double> d_;
};

double euclidean_distance(std::span<const double> a, std::span<const double> b);

struct KDistanceProfile {
  int k = 0;
  /// Per-point mean distance to its k nearest other points, ascending.
  std::vector<double> distances;
  std::size_t elbow_index = 0;
  double epsilon = 0.0;
};

enum class PointRole { kCore, kBorder, kNoise };

inline constexpr int kNoise = -1;

struct ClusteringResult {
  double epsilon = 0.0;
  int min_pts = 0;
  /// Cluster id in 0..K-1 per point, or kNoise.
  std::vector<int> assignment;
  std::vector<PointRole> role;
  std::optional<double> silhouette;

  int cluster_count() const;
};

struct RootCauseCluster {
  int id = 0;
  std::vector<std::string> member_ids;
  std::vector<std::string> core_ids;
};

struct RootCauseClusterSet {
  std::vector<RootCauseCluster> clusters;
  double epsilon = 0.0;
  int min_pts = 0;
};

/// Index of the point of maximum perpendicular distance from the chord
/// joining the first and last points of the (axis-normalized) curve. Ties go
/// to the lowest index. A collinear or constant profile (maximum below 1e-9)
/// falls back to the 90th-percentile position floor(0.9 * (n - 1)).
std::size_t find_elbow(std::span<const double> distances);

KDistanceProfile k_distance_profile(const FeatureMatrix& x, int k);
KDistanceProfile k_distance_profile(const DistanceMatrix& dist, int k);

/// Classic DBSCAN. A point is core when its closed eps-neighbourhood
/// (itself included) holds at least min_pts points. Clusters are numbered in
/// order of their lowest-index core point; a border point joins the cluster
/// of its lowest-index core neighbour.
ClusteringResult dbscan(const FeatureMatrix& x, double eps, int min_pts);
ClusteringResult dbscan(const DistanceMatrix& dist, double eps, int min_pts);

/// Mean silhouette over non-noise points; members of singleton clusters
/// contribute 0. Throws kUndefinedSilhouette with fewer than two clusters.
double silhouette(const FeatureMatrix& x, std::span<const int> assignment);
double silhouette(const DistanceMatrix& dist, std::span<const int> assignment);

struct SweepEntry {
  int min_pts = 0;
  int clusters = 0;
  std::size_t noise = 0;
  std::optional<double> silhouette;
};

struct MinPtsTuning {
  int min_pts = 0;
  ClusteringResult result;
  std::vector<SweepEntry> sweep;
};

/// Runs DBSCAN for every MinPts in the sweep (upper end capped at n) and
/// keeps the result with >= 2 clusters and the highest silhouette; ties go
/// to the smallest MinPts.
MinPtsTuning tune_min_pts(const FeatureMatrix& x, double eps, SweepRange sweep);
MinPtsTuning tune_min_pts(const DistanceMatrix& dist, double eps, SweepRange sweep);

struct AutoClusterOutput {
  KDistanceProfile profile;
  MinPtsTuning tuning;
  ClusteringResult result;
  RootCauseClusterSet clusters;
};

AutoClusterOutput auto_cluster(const FeatureMatrix& x, const RunConfig& config);

RootCauseClusterSet to_root_cause_clusters(const ClusteringResult& result,
                                           const std::vector<std::string>& ids);

std::string_view to_string(PointRole role) noexcept;

}  // namespace safe
