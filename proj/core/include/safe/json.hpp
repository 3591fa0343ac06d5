#pragma once

// JSON carriers for every artifact passed between CLI stages. Key order is
// fixed, so identical inputs serialize to identical bytes.

#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "safe/clustering.hpp"
#include "safe/evalstats.hpp"
#include "safe/reduction.hpp"
#include "safe/rootcause.hpp"
#include "safe/selection.hpp"
#include "safe/types.hpp"

namespace safe {

using Json = nlohmann::ordered_json;

Json to_json(const RunConfig& config);
RunConfig run_config_from_json(const Json& j);

Json to_json(const PcaModel& model);
PcaModel pca_model_from_json(const Json& j);

Json to_json(const KDistanceProfile& profile);
Json to_json(const ClusteringResult& result, const std::vector<std::string>& ids);
ClusteringResult clustering_from_json(const Json& j, std::vector<std::string>* ids = nullptr);
Json to_json(const RootCauseClusterSet& set);
RootCauseClusterSet root_cause_clusters_from_json(const Json& j);
Json to_json(const std::vector<SweepEntry>& sweep);

Json to_json(const VarianceReport& report);
Json to_json(const ExplanatoryVerdict& verdict);
Json to_json(const CoverageReport& report);
Json to_json(const std::vector<HistogramBin>& bins);

Json to_json(const CoreAssignment& assignment);
Json to_json(const SelectionPlan& plan);
Json to_json(const RetrainManifest& manifest);

Json to_json(const StatsComparison& c);

/// Two-space indented dump with a trailing newline.
std::string dump(const Json& j);
Json parse_json_file(const std::filesystem::path& path);

}  // namespace safe
