#include "safe/json.hpp"

#include "safe/dataio.hpp"
#include "safe/error.hpp"

namespace safe {
namespace {

template <typename F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string(what) + ": " + e.what());
  }
}

PointRole role_from_string(const std::string& s) {
  if (s == "core") return PointRole::kCore;
  if (s == "border") return PointRole::kBorder;
  if (s == "noise") return PointRole::kNoise;
  throw Error(ErrorCode::kParseError, "unknown point role '" + s + "'");
}

}  // namespace

Json to_json(const RunConfig& c) {
  Json j;
  j["target_dim"] = c.target_dim;
  j["k_neighbors"] = c.k_neighbors;
  j["minpts_sweep"] = {c.minpts_sweep.lo, c.minpts_sweep.hi};
  j["selection_factor"] = c.selection_factor;
  j["rr_threshold"] = c.rr_threshold;
  j["seed"] = c.seed;
  return j;
}

RunConfig run_config_from_json(const Json& j) {
  return guarded("run config", [&] {
    RunConfig c;
    c.target_dim = j.at("target_dim").get<int>();
    c.k_neighbors = j.at("k_neighbors").get<int>();
    c.minpts_sweep = {j.at("minpts_sweep").at(0).get<int>(), j.at("minpts_sweep").at(1).get<int>()};
    c.selection_factor = j.at("selection_factor").get<double>();
    c.rr_threshold = j.at("rr_threshold").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.validate();
    return c;
  });
}

Json to_json(const PcaModel& model) {
  Json j;
  j["input_dim"] = model.input_dim();
  j["output_dim"] = model.output_dim();
  j["total_variance"] = model.total_variance;
  j["mean"] = model.mean;
  j["explained_variance"] = model.explained_variance;
  Json comps = Json::array();
  for (std::size_t k = 0; k < model.output_dim(); ++k) {
    const auto c = model.component(k);
    comps.push_back(std::vector<double>(c.begin(), c.end()));
  }
  j["components"] = std::move(comps);
  return j;
}

PcaModel pca_model_from_json(const Json& j) {
  return guarded("PCA model", [&] {
    PcaModel model;
    model.mean = j.at("mean").get<std::vector<double>>();
    model.explained_variance = j.at("explained_variance").get<std::vector<double>>();
    model.total_variance = j.at("total_variance").get<double>();
    const auto& comps = j.at("components");
    if (comps.size() != model.explained_variance.size()) {
      throw Error(ErrorCode::kParseError, "PCA model: component count differs from variance count");
    }
    for (const auto& row : comps) {
      auto r = row.get<std::vector<double>>();
      if (r.size() != model.mean.size()) throw Error(ErrorCode::kParseError, "PCA model: ragged component");
      model.components.insert(model.components.end(), r.begin(), r.end());
    }
    return model;
  });
}

Json to_json(const KDistanceProfile& p) {
  Json j;
  j["k"] = p.k;
  j["elbow_index"] = p.elbow_index;
  j["epsilon"] = p.epsilon;
  j["distances"] = p.distances;
  return j;
}

Json to_json(const ClusteringResult& r, const std::vector<std::string>& ids) {
  Json j;
  j["epsilon"] = r.epsilon;
  j["min_pts"] = r.min_pts;
  j["cluster_count"] = r.cluster_count();
  j["silhouette"] = r.silhouette ? Json(*r.silhouette) : Json(nullptr);
  Json points = Json::array();
  for (std::size_t i = 0; i < r.assignment.size(); ++i) {
    Json p;
    p["id"] = ids.at(i);
    p["cluster"] = r.assignment[i] == kNoise ? Json(nullptr) : Json(r.assignment[i]);
    p["role"] = std::string(to_string(r.role[i]));
    p["core"] = r.role[i] == PointRole::kCore;
    points.push_back(std::move(p));
  }
  j["points"] = std::move(points);
  return j;
}

ClusteringResult clustering_from_json(const Json& j, std::vector<std::string>* ids) {
  return guarded("clustering result", [&] {
    ClusteringResult r;
    r.epsilon = j.at("epsilon").get<double>();
    r.min_pts = j.at("min_pts").get<int>();
    if (!j.at("silhouette").is_null()) r.silhouette = j["silhouette"].get<double>();
    for (const auto& p : j.at("points")) {
      r.assignment.push_back(p.at("cluster").is_null() ? kNoise : p["cluster"].get<int>());
      r.role.push_back(role_from_string(p.at("role").get<std::string>()));
      if (ids) ids->push_back(p.at("id").get<std::string>());
    }
    return r;
  });
}

Json to_json(const RootCauseClusterSet& set) {
  Json j;
  j["epsilon"] = set.epsilon;
  j["min_pts"] = set.min_pts;
  j["cluster_count"] = set.clusters.size();
  Json clusters = Json::array();
  for (const auto& c : set.clusters) {
    Json cj;
    cj["id"] = c.id;
    cj["size"] = c.member_ids.size();
    cj["core_count"] = c.core_ids.size();
    cj["member_ids"] = c.member_ids;
    cj["core_ids"] = c.core_ids;
    clusters.push_back(std::move(cj));
  }
  j["clusters"] = std::move(clusters);
  return j;
}

RootCauseClusterSet root_cause_clusters_from_json(const Json& j) {
  return guarded("root cause clusters", [&] {
    RootCauseClusterSet set;
    set.epsilon = j.at("epsilon").get<double>();
    set.min_pts = j.at("min_pts").get<int>();
    for (const auto& cj : j.at("clusters")) {
      RootCauseCluster c;
      c.id = cj.at("id").get<int>();
      c.member_ids = cj.at("member_ids").get<std::vector<std::string>>();
      c.core_ids = cj.at("core_ids").get<std::vector<std::string>>();
      set.clusters.push_back(std::move(c));
    }
    for (std::size_t i = 0; i < set.clusters.size(); ++i) {
      if (set.clusters[i].id != static_cast<int>(i)) {
        throw Error(ErrorCode::kParseError, "root cause clusters: ids must be contiguous from 0");
      }
    }
    return set;
  });
}

Json to_json(const std::vector<SweepEntry>& sweep) {
  Json arr = Json::array();
  for (const auto& e : sweep) {
    Json j;
    j["min_pts"] = e.min_pts;
    j["clusters"] = e.clusters;
    j["noise"] = e.noise;
    j["silhouette"] = e.silhouette ? Json(*e.silhouette) : Json(nullptr);
    arr.push_back(std::move(j));
  }
  return arr;
}

Json to_json(const VarianceReport& report) {
  Json arr = Json::array();
  for (const auto& c : report.clusters) {
    Json cj;
    cj["cluster"] = c.cluster_id;
    cj["size"] = c.size;
    cj["singleton"] = c.singleton;
    Json params = Json::array();
    for (const auto& p : c.params) {
      params.push_back({{"param", p.param},
                        {"rr", p.rr},
                        {"cluster_mean", p.cluster_mean},
                        {"cluster_variance", p.cluster_variance},
                        {"global_variance", p.global_variance}});
    }
    cj["params"] = std::move(params);
    arr.push_back(std::move(cj));
  }
  return Json{{"clusters", std::move(arr)}};
}

Json to_json(const ExplanatoryVerdict& verdict) {
  Json arr = Json::array();
  for (const auto& c : verdict.clusters) {
    Json cj;
    cj["cluster"] = c.cluster_id;
    cj["explanatory"] = c.explanatory;
    Json ws = Json::array();
    for (const auto& w : c.witnesses) {
      ws.push_back({{"param", w.param}, {"unsafe_value", w.unsafe_value}, {"cluster_mean", w.cluster_mean}, {"rr", w.rr}});
    }
    cj["witnesses"] = std::move(ws);
    arr.push_back(std::move(cj));
  }
  Json j;
  j["explanatory_count"] = verdict.explanatory_count();
  j["cluster_count"] = verdict.clusters.size();
  j["clusters"] = std::move(arr);
  return j;
}

Json to_json(const CoverageReport& report) {
  auto refs = [](const std::vector<UnsafeValueRef>& v) {
    Json arr = Json::array();
    for (const auto& r : v) arr.push_back({{"param", r.param}, {"value", r.value}});
    return arr;
  };
  Json j;
  j["coverage_count"] = report.coverage_count();
  j["total_count"] = report.total.size();
  j["covered"] = refs(report.covered);
  j["total"] = refs(report.total);
  return j;
}

Json to_json(const std::vector<HistogramBin>& bins) {
  Json arr = Json::array();
  for (const auto& b : bins) arr.push_back({{"threshold", b.threshold}, {"percentage", b.percentage}});
  return arr;
}

Json to_json(const CoreAssignment& assignment) {
  Json arr = Json::array();
  for (const auto& m : assignment.matches) {
    arr.push_back({{"id", m.id}, {"cluster", m.cluster_id}, {"closest_core_id", m.closest_core_id}, {"distance", m.distance}});
  }
  return arr;
}

Json to_json(const SelectionPlan& plan) {
  Json j;
  j["budget"] = plan.budget;
  j["selected_count"] = plan.selected_count();
  Json arr = Json::array();
  for (const auto& c : plan.clusters) {
    arr.push_back({{"cluster", c.cluster_id},
                   {"quota", c.quota},
                   {"assigned", c.assigned},
                   {"shortfall", c.shortfall},
                   {"selected", c.selected}});
  }
  j["clusters"] = std::move(arr);
  return j;
}

Json to_json(const RetrainManifest& m) {
  Json j;
  j["seed"] = m.seed;
  j["total_weight"] = m.total_weight();
  j["original_train_ids"] = m.original_train_ids;
  Json unsafe = Json::array();
  for (const auto& u : m.unsafe_entries) unsafe.push_back({{"id", u.id}, {"replication_count", u.replication_count}});
  j["unsafe_entries"] = std::move(unsafe);
  Json entries = Json::array();
  for (const auto& e : m.entries) {
    entries.push_back({{"id", e.id}, {"provenance", std::string(to_string(e.provenance))}, {"weight", e.weight}});
  }
  j["entries"] = std::move(entries);
  return j;
}

Json to_json(const StatsComparison& c) {
  Json j;
  j["a12"] = c.a12;
  j["u_statistic"] = c.u_statistic;
  j["p_value"] = c.p_value;
  j["n_x"] = c.n_x;
  j["n_y"] = c.n_y;
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json parse_json_file(const std::filesystem::path& path) {
  const auto text = read_text_file(path);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParseError, path.string() + ": " + e.what());
  }
}

}  // namespace safe
