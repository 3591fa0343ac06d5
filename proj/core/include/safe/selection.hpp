#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "safe/clustering.hpp"
#include "safe/types.hpp"

namespace safe {

struct CoreMatch {
  std::string id;
  int cluster_id = 0;
  std::string closest_core_id;
  double distance = 0.0;
};

/// One entry per improvement-set point, in input order.
struct CoreAssignment {
  std::vector<CoreMatch> matches;

  /// Number of improvement points per cluster, indexed 0..cluster_count-1.
  std::vector<std::size_t> counts(std::size_t cluster_count) const;
};

struct ClusterSelection {
  int cluster_id = 0;
  std::size_t quota = 0;
  std::size_t assigned = 0;
  /// quota - assigned when fewer points were assigned than the quota.
  std::size_t shortfall = 0;
  /// Ascending by distance to the closest core point, ties by id.
  std::vector<std::string> selected;
};

struct SelectionPlan {
  std::size_t budget = 0;
  std::vector<ClusterSelection> clusters;

  std::size_t selected_count() const;
  std::vector<std::string> selected_ids() const;
};

struct UnsafeEntryCount {
  std::string id;
  std::size_t replication_count = 0;
};

enum class Provenance { kTrain, kUnsafe, kBoth };

struct ManifestEntry {
  std::string id;
  Provenance provenance = Provenance::kTrain;
  /// 1 per training-set occurrence plus the bootstrap replication count.
  std::size_t weight = 0;
};

struct RetrainManifest {
  std::vector<std::string> original_train_ids;
  std::vector<UnsafeEntryCount> unsafe_entries;
  std::uint64_t seed = 0;
  std::vector<ManifestEntry> entries;

  std::size_t total_weight() const;
};

/// Assigns every improvement point to the cluster of its nearest core point
/// (euclidean, in the reduced space shared with `cluster_space`). Ties go to
/// the lowest cluster id, then the lexicographically lowest core id.
CoreAssignment assign_to_clusters(const FeatureMatrix& improvement, const RootCauseClusterSet& clusters,
                                  const FeatureMatrix& cluster_space);

/// N = round-half-up(test_set_size * sf * (1 - test_acc)).
std::size_t unsafe_set_size(std::size_t test_set_size, double sf, double test_acc);

/// Largest-remainder apportionment of min(N, C) over the clusters in
/// proportion to their assigned counts; equal remainders favour the lower
/// cluster id.
std::vector<std::size_t> cluster_quotas(std::size_t budget, const std::vector<std::size_t>& assigned_counts);

SelectionPlan select_unsafe_set(const CoreAssignment& assignment, const std::vector<std::size_t>& quotas,
                                std::size_t budget);

/// Uniform sample of min(N, C) improvement points without replacement,
/// grouped by their assigned cluster. Baseline for comparison runs.
SelectionPlan select_random(const CoreAssignment& assignment, std::size_t cluster_count, std::size_t budget,
                            std::uint64_t seed);

/// Every id once, then target - |ids| extra draws with replacement.
std::vector<UnsafeEntryCount> bootstrap_balance(const std::vector<std::string>& unsafe_ids, std::size_t target,
                                                std::uint64_t seed);

RetrainManifest build_retrain_manifest(const std::vector<std::string>& original_train_ids,
                                       const std::vector<UnsafeEntryCount>& balanced_unsafe, std::uint64_t seed);

std::string_view to_string(Provenance p) noexcept;

}  // namespace safe
