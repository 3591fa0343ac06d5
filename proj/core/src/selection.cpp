#include "safe/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_map>

#include "safe/error.hpp"
#include "safe/parallel.hpp"
#include "safe/random.hpp"

namespace safe {
namespace {

bool closer(const CoreMatch& a, const CoreMatch& b) {
  if (a.distance != b.distance) return a.distance < b.distance;
  return a.id < b.id;
}

std::vector<std::vector<const CoreMatch*>> group_by_cluster(const CoreAssignment& assignment,
                                                            std::size_t cluster_count) {
  std::vector<std::vector<const CoreMatch*>> groups(cluster_count);
  for (const auto& m : assignment.matches) {
    if (m.cluster_id < 0 || static_cast<std::size_t>(m.cluster_id) >= cluster_count) {
      throw Error(ErrorCode::kInvalidArgument, "match for '" + m.id + "' names unknown cluster " +
                                                   std::to_string(m.cluster_id));
    }
    groups[static_cast<std::size_t>(m.cluster_id)].push_back(&m);
  }
  for (auto& g : groups) {
    std::sort(g.begin(), g.end(), [](const CoreMatch* a, const CoreMatch* b) { return closer(*a, *b); });
  }
  return groups;
}

}  // namespace

std::vector<std::size_t> CoreAssignment::counts(std::size_t cluster_count) const {
  std::vector<std::size_t> out(cluster_count, 0);
  for (const auto& m : matches) {
    if (m.cluster_id >= 0 && static_cast<std::size_t>(m.cluster_id) < cluster_count) {
      ++out[static_cast<std::size_t>(m.cluster_id)];
    }
  }
  return out;
}

std::size_t SelectionPlan::selected_count() const {
  std::size_t total = 0;
  for (const auto& c : clusters) total += c.selected.size();
  return total;
}

std::vector<std::string> SelectionPlan::selected_ids() const {
  std::vector<std::string> out;
  for (const auto& c : clusters) out.insert(out.end(), c.selected.begin(), c.selected.end());
  return out;
}

std::size_t RetrainManifest::total_weight() const {
  std::size_t total = 0;
  for (const auto& e : entries) total += e.weight;
  return total;
}

std::string_view to_string(Provenance p) noexcept {
  switch (p) {
    case Provenance::kTrain: return "train";
    case Provenance::kUnsafe: return "unsafe";
    case Provenance::kBoth: return "both";
  }
  return "train";
}

CoreAssignment assign_to_clusters(const FeatureMatrix& improvement, const RootCauseClusterSet& clusters,
                                  const FeatureMatrix& cluster_space) {
  if (improvement.cols() != cluster_space.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "improvement set has " + std::to_string(improvement.cols()) +
                                                   " features, cluster space has " +
                                                   std::to_string(cluster_space.cols()));
  }
  if (clusters.clusters.empty()) throw Error(ErrorCode::kEmptyClusterSet, "no root cause clusters");

  struct Core {
    int cluster_id;
    std::string id;
    std::size_t row;
  };
  std::vector<Core> cores;
  for (const auto& cluster : clusters.clusters) {
    if (cluster.core_ids.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "cluster " + std::to_string(cluster.id) + " has no core points");
    }
    for (const auto& core_id : cluster.core_ids) {
      auto row = cluster_space.index_of(core_id);
      if (!row) throw Error(ErrorCode::kIdMismatch, "core point '" + core_id + "' missing from cluster space");
      cores.push_back({cluster.id, core_id, *row});
    }
  }
  std::sort(cores.begin(), cores.end(), [](const Core& a, const Core& b) {
    if (a.cluster_id != b.cluster_id) return a.cluster_id < b.cluster_id;
    return a.id < b.id;
  });

  CoreAssignment out;
  out.matches.resize(improvement.rows());
  parallel_for(improvement.rows(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto point = improvement.row(i);
      const Core* best = nullptr;
      double best_d = 0.0;
      for (const auto& core : cores) {
        const double d = euclidean_distance(point, cluster_space.row(core.row));
        if (!best || d < best_d) {
          best = &core;
          best_d = d;
        }
      }
      out.matches[i] = {improvement.ids()[i], best->cluster_id, best->id, best_d};
    }
  });
  return out;
}

std::size_t unsafe_set_size(std::size_t test_set_size, double sf, double test_acc) {
  if (!(sf >= 0.0 && sf <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "sf must lie in [0, 1]");
  if (!(test_acc >= 0.0 && test_acc <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "test accuracy must lie in [0, 1]");
  const double raw = (static_cast<double>(test_set_size) * sf) * (1.0 - test_acc);
  return static_cast<std::size_t>(std::floor(raw + 0.5));
}

std::vector<std::size_t> cluster_quotas(std::size_t budget, const std::vector<std::size_t>& assigned_counts) {
  const std::size_t total = std::accumulate(assigned_counts.begin(), assigned_counts.end(), std::size_t{0});
  if (total == 0) throw Error(ErrorCode::kEmptyImprovementSet, "no improvement points were assigned");
  if (budget >= total) return assigned_counts;

  const std::size_t k = assigned_counts.size();
  std::vector<std::size_t> quotas(k);
  std::vector<std::size_t> remainder(k);
  std::size_t given = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t scaled = budget * assigned_counts[i];
    quotas[i] = scaled / total;
    remainder[i] = scaled % total;
    given += quotas[i];
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t u = 0; u < budget - given; ++u) ++quotas[order[u]];
  return quotas;
}

SelectionPlan select_unsafe_set(const CoreAssignment& assignment, const std::vector<std::size_t>& quotas,
                                std::size_t budget) {
  const auto groups = group_by_cluster(assignment, quotas.size());
  SelectionPlan plan;
  plan.budget = budget;
  for (std::size_t c = 0; c < quotas.size(); ++c) {
    ClusterSelection sel;
    sel.cluster_id = static_cast<int>(c);
    sel.quota = quotas[c];
    sel.assigned = groups[c].size();
    sel.shortfall = sel.quota > sel.assigned ? sel.quota - sel.assigned : 0;
    const std::size_t take = std::min(sel.quota, sel.assigned);
    for (std::size_t i = 0; i < take; ++i) sel.selected.push_back(groups[c][i]->id);
    plan.clusters.push_back(std::move(sel));
  }
  return plan;
}

SelectionPlan select_random(const CoreAssignment& assignment, std::size_t cluster_count, std::size_t budget,
                            std::uint64_t seed) {
  std::vector<const CoreMatch*> pool;
  pool.reserve(assignment.matches.size());
  for (const auto& m : assignment.matches) pool.push_back(&m);
  std::sort(pool.begin(), pool.end(), [](const CoreMatch* a, const CoreMatch* b) { return a->id < b->id; });

  const std::size_t take = std::min(budget, pool.size());
  Rng rng(seed);
  for (std::size_t i = 0; i < take; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  CoreAssignment picked;
  for (std::size_t i = 0; i < take; ++i) picked.matches.push_back(*pool[i]);
  const auto counts = picked.counts(cluster_count);
  auto plan = select_unsafe_set(picked, counts, budget);
  const auto available = assignment.counts(cluster_count);
  for (std::size_t c = 0; c < cluster_count; ++c) plan.clusters[c].assigned = available[c];
  return plan;
}

std::vector<UnsafeEntryCount> bootstrap_balance(const std::vector<std::string>& unsafe_ids, std::size_t target,
                                                std::uint64_t seed) {
  if (unsafe_ids.empty()) throw Error(ErrorCode::kEmptyUnsafeSet, "nothing to balance");
  if (target < unsafe_ids.size()) {
    throw Error(ErrorCode::kInvalidArgument, "balance target " + std::to_string(target) +
                                                 " is below the unsafe set size " + std::to_string(unsafe_ids.size()));
  }
  std::set<std::string> seen;
  for (const auto& id : unsafe_ids) {
    if (!seen.insert(id).second) throw Error(ErrorCode::kDuplicateId, "unsafe id '" + id + "'");
  }
  std::vector<UnsafeEntryCount> out;
  out.reserve(unsafe_ids.size());
  for (const auto& id : unsafe_ids) out.push_back({id, 1});
  Rng rng(seed);
  for (std::size_t extra = unsafe_ids.size(); extra < target; ++extra) {
    ++out[static_cast<std::size_t>(rng.below(out.size()))].replication_count;
  }
  return out;
}

RetrainManifest build_retrain_manifest(const std::vector<std::string>& original_train_ids,
                                       const std::vector<UnsafeEntryCount>& balanced_unsafe, std::uint64_t seed) {
  RetrainManifest manifest;
  manifest.original_train_ids = original_train_ids;
  manifest.unsafe_entries = balanced_unsafe;
  manifest.seed = seed;

  std::unordered_map<std::string, std::size_t> index;
  for (const auto& id : original_train_ids) {
    auto [it, inserted] = index.emplace(id, manifest.entries.size());
    if (inserted) {
      manifest.entries.push_back({id, Provenance::kTrain, 1});
    } else {
      ++manifest.entries[it->second].weight;
    }
  }
  for (const auto& u : balanced_unsafe) {
    auto [it, inserted] = index.emplace(u.id, manifest.entries.size());
    if (inserted) {
      manifest.entries.push_back({u.id, Provenance::kUnsafe, u.replication_count});
    } else {
      auto& entry = manifest.entries[it->second];
      entry.provenance = Provenance::kBoth;
      entry.weight += u.replication_count;
    }
  }
  return manifest;
}

}  // namespace safe
