#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <map>
#include <ostream>

#include "provenance.hpp"
#include "report.hpp"
#include "safe/clustering.hpp"
#include "safe/dataio.hpp"
#include "safe/error.hpp"
#include "safe/evalstats.hpp"
#include "safe/imaging.hpp"
#include "safe/json.hpp"
#include "safe/random.hpp"
#include "safe/reduction.hpp"
#include "safe/rootcause.hpp"
#include "safe/selection.hpp"
#include "safe/synthgen.hpp"

namespace safe::cli {
namespace {

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoFailure, dir.string() + ": " + ec.message());
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::istringstream in(read_text_file(path));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t");
    lines.push_back(line.substr(first, last - first + 1));
  }
  return lines;
}

// Files written by `cluster` and read back by `analyze` and `select`.
struct ClusterRun {
  PcaModel model;
  FeatureMatrix reduced;
  RootCauseClusterSet clusters;
};

ClusterRun load_cluster_run(const fs::path& dir) {
  return {pca_model_from_json(parse_json_file(dir / "pca_model.json")),
          load_feature_matrix(dir / "reduced_features.csv"),
          root_cause_clusters_from_json(parse_json_file(dir / "clusters.json"))};
}

// Up to five members per cluster, ascending distance to the cluster's
// nearest core point, ties by id.
std::vector<std::vector<std::string>> representatives(const RootCauseClusterSet& set, const FeatureMatrix& space) {
  auto row_of = [&](const std::string& id) {
    auto r = space.index_of(id);
    if (!r) throw Error(ErrorCode::kIdMismatch, "cluster member '" + id + "' missing from reduced features");
    return *r;
  };
  std::vector<std::vector<std::string>> out;
  for (const auto& c : set.clusters) {
    std::vector<std::size_t> cores;
    for (const auto& id : c.core_ids) cores.push_back(row_of(id));
    std::vector<std::pair<double, std::string>> ranked;
    for (const auto& id : c.member_ids) {
      const auto r = row_of(id);
      double best = std::numeric_limits<double>::infinity();
      for (auto k : cores) best = std::min(best, euclidean_distance(space.row(r), space.row(k)));
      ranked.emplace_back(best, id);
    }
    std::sort(ranked.begin(), ranked.end());
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < ranked.size() && i < 5; ++i) ids.push_back(ranked[i].second);
    out.push_back(std::move(ids));
  }
  return out;
}

}  // namespace

std::vector<double> read_accuracy_list(const fs::path& path) {
  std::vector<double> values;
  std::size_t n = 0;
  for (const auto& line : read_lines(path)) {
    ++n;
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(line, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != line.size()) {
      throw Error(ErrorCode::kParseError, path.string() + ": entry " + std::to_string(n) + " '" + line +
                                              "' is not a number");
    }
    if (!std::isfinite(v)) throw Error(ErrorCode::kNonFiniteValue, path.string() + ": entry " + std::to_string(n));
    values.push_back(v);
  }
  if (values.empty()) throw Error(ErrorCode::kEmptyFile, path.string() + ": no accuracy values");
  return values;
}

std::vector<std::string> read_id_list(const fs::path& path) { return read_lines(path); }

void cmd_extract(const ExtractOptions& opt, std::ostream& out) {
  FeatureMatrix x = [&] {
    if (opt.features) return load_feature_matrix(*opt.features);
    std::error_code ec;
    if (!fs::is_directory(*opt.images, ec)) {
      throw Error(ErrorCode::kIoFailure, opt.images->string() + ": not a directory");
    }
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(*opt.images)) {
      if (e.is_regular_file() && e.path().extension() == ".pgm") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw Error(ErrorCode::kEmptyFile, opt.images->string() + ": no .pgm images");
    std::vector<std::pair<std::string, GrayImage>> images;
    for (const auto& f : files) images.emplace_back(f.filename().string(), read_pgm(f));
    return surrogate_extract(images);
  }();
  save_feature_matrix(x, opt.out);
  out << "extract: " << x.rows() << " x " << x.cols() << " -> " << opt.out.string() << '\n';
}

void cmd_cluster(const ClusterOptions& opt, std::ostream& out) {
  opt.config.validate();
  const auto x = load_feature_matrix(opt.features);
  ensure_dir(opt.out);
  RunManifest manifest("cluster", to_json(opt.config));
  manifest.input("features", opt.features);

  const auto model = fit_pca(x, opt.config.target_dim);
  const auto reduced = pca_transform(model, x);
  const auto result = auto_cluster(reduced, opt.config);

  Json clustering = to_json(result.result, reduced.ids());
  clustering["profile"] = to_json(result.profile);
  clustering["sweep"] = to_json(result.tuning.sweep);

  emit(manifest, opt.out, "pca_model.json", dump(to_json(model)));
  std::ostringstream csv;
  write_feature_matrix(reduced, csv);
  emit(manifest, opt.out, "reduced_features.csv", csv.str());
  emit(manifest, opt.out, "clustering.json", dump(clustering));
  emit(manifest, opt.out, "clusters.json", dump(to_json(result.clusters)));
  manifest.write(opt.out);

  std::size_t noise = 0;
  for (int a : result.result.assignment) noise += a == kNoise ? 1 : 0;
  out << "cluster: " << x.rows() << " inputs, " << model.output_dim() << " components, eps "
      << format_real(result.result.epsilon) << ", MinPts " << result.result.min_pts << " -> "
      << result.result.cluster_count() << " clusters, " << noise << " noise\n";
}

void cmd_analyze(const AnalyzeOptions& opt, std::ostream& out) {
  const auto run = load_cluster_run(opt.clusters);
  const auto table = load_parameter_table(opt.params);
  UnsafeValueSpec spec;
  if (opt.spec) spec = load_unsafe_spec(*opt.spec);
  check_spec_against_table(spec, table);

  AnalysisBundle b;
  b.clusters = run.clusters;
  b.spec = spec;
  b.rr_threshold = opt.rr_threshold;
  b.error_count = static_cast<long>(run.reduced.rows());
  try {
    b.variance = variance_reduction(b.clusters, table, run.reduced.ids());
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kMissingParameter) throw;
    throw Error(ErrorCode::kIdMismatch, std::string(e.what()).substr(std::string("MissingParameter: ").size()));
  }
  b.verdict = explanatory_clusters(b.variance, spec, opt.rr_threshold);
  b.coverage = unsafe_value_coverage(b.verdict, spec);
  if (!b.clusters.clusters.empty()) b.histogram = reduction_histogram(b.variance);
  b.inspection_hundredths = inspection_ratio_hundredths(static_cast<long>(b.clusters.clusters.size()), b.error_count);
  b.representatives = representatives(b.clusters, run.reduced);

  Json config;
  config["rr_threshold"] = opt.rr_threshold;
  RunManifest manifest("analyze", config);
  manifest.input("clusters", opt.clusters / "clusters.json");
  manifest.input("reduced_features", opt.clusters / "reduced_features.csv");
  manifest.input("params", opt.params);
  if (opt.spec) manifest.input("spec", *opt.spec);

  Json summary;
  summary["cluster_count"] = b.clusters.clusters.size();
  summary["error_count"] = b.error_count;
  summary["inspection_ratio"] = static_cast<double>(b.inspection_hundredths) / 100.0;
  summary["explanatory_count"] = b.verdict.explanatory_count();
  summary["explanatory_percentage"] = explanatory_percentage(b);
  summary["coverage_count"] = b.coverage.coverage_count();
  summary["total_unsafe_values"] = b.coverage.total.size();
  summary["histogram"] = to_json(b.histogram);
  Json reps = Json::array();
  for (std::size_t c = 0; c < b.representatives.size(); ++c) {
    reps.push_back({{"cluster", b.clusters.clusters[c].id}, {"ids", b.representatives[c]}});
  }
  summary["representatives"] = std::move(reps);

  ensure_dir(opt.out);
  emit(manifest, opt.out, "variance_report.json", dump(to_json(b.variance)));
  emit(manifest, opt.out, "explanatory.json", dump(to_json(b.verdict)));
  emit(manifest, opt.out, "coverage.json", dump(to_json(b.coverage)));
  emit(manifest, opt.out, "summary.json", dump(summary));
  const auto text = render_text_report(b);
  emit(manifest, opt.out, "report.txt", text);
  emit(manifest, opt.out, "report.html", render_html_report(b));
  manifest.write(opt.out);
  out << text;
}

void cmd_select(const SelectOptions& opt, std::ostream& out) {
  if (opt.strategy != "core" && opt.strategy != "random") {
    throw Error(ErrorCode::kInvalidArgument, "strategy must be 'core' or 'random'");
  }
  const auto run = load_cluster_run(opt.clusters);
  const auto raw = load_feature_matrix(opt.improvement);
  std::vector<std::string> train;
  if (opt.train_ids) train = read_id_list(*opt.train_ids);

  if (raw.cols() != run.model.input_dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "improvement set has " + std::to_string(raw.cols()) +
                                                   " features, the stored PCA model expects " +
                                                   std::to_string(run.model.input_dim()));
  }
  const auto improvement = pca_transform(run.model, raw);
  const auto assignment = assign_to_clusters(improvement, run.clusters, run.reduced);
  const std::size_t k = run.clusters.clusters.size();
  const std::size_t budget = unsafe_set_size(opt.test_size, opt.sf, opt.test_acc);

  SelectionPlan plan;
  if (opt.strategy == "core") {
    plan = select_unsafe_set(assignment, cluster_quotas(budget, assignment.counts(k)), budget);
  } else {
    plan = select_random(assignment, k, budget, derive_seed(opt.seed, "select-random"));
  }
  const auto chosen = plan.selected_ids();
  const std::size_t target = opt.balance_target.value_or(chosen.size());
  std::vector<UnsafeEntryCount> balanced;
  if (!chosen.empty()) {
    balanced = bootstrap_balance(chosen, target, derive_seed(opt.seed, "bootstrap"));
  } else if (target != 0) {
    throw Error(ErrorCode::kInvalidArgument, "balance target " + std::to_string(target) + " with an empty unsafe set");
  }
  const auto retrain = build_retrain_manifest(train, balanced, opt.seed);

  Json config;
  config["test_size"] = opt.test_size;
  config["test_acc"] = opt.test_acc;
  config["sf"] = opt.sf;
  config["strategy"] = opt.strategy;
  config["balance_target"] = target;
  config["seed"] = opt.seed;
  RunManifest manifest("select", config);
  manifest.input("pca_model", opt.clusters / "pca_model.json");
  manifest.input("clusters", opt.clusters / "clusters.json");
  manifest.input("reduced_features", opt.clusters / "reduced_features.csv");
  manifest.input("improvement", opt.improvement);
  if (opt.train_ids) manifest.input("train_ids", *opt.train_ids);

  ensure_dir(opt.out);
  emit(manifest, opt.out, "assignment.json", dump(to_json(assignment)));
  emit(manifest, opt.out, "selection_plan.json", dump(to_json(plan)));
  emit(manifest, opt.out, "retrain_manifest.json", dump(to_json(retrain)));
  manifest.write(opt.out);
  out << "select: N = " << budget << ", selected " << plan.selected_count() << " of " << raw.rows()
      << " improvement inputs over " << k << " clusters (" << opt.strategy << "); retrain weight "
      << retrain.total_weight() << '\n';
}

void cmd_compare(const CompareOptions& opt, std::ostream& out) {
  if (opt.runs.size() < 2) throw Error(ErrorCode::kInvalidArgument, "compare needs at least two --runs files");
  std::vector<std::vector<double>> samples;
  Json runs = Json::array();
  for (const auto& path : opt.runs) {
    samples.push_back(read_accuracy_list(path));
    double mean = 0;
    for (double v : samples.back()) mean += v;
    mean /= static_cast<double>(samples.back().size());
    runs.push_back({{"path", path.generic_string()}, {"n", samples.back().size()}, {"mean", mean}});
  }
  Json pairs = Json::array();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (std::size_t j = i + 1; j < samples.size(); ++j) {
      Json p;
      p["x"] = i;
      p["y"] = j;
      p["result"] = to_json(compare_samples(samples[i], samples[j]));
      pairs.push_back(std::move(p));
    }
  }
  Json j;
  j["runs"] = std::move(runs);
  j["pairs"] = std::move(pairs);
  if (opt.out) {
    write_text_file(*opt.out, dump(j));
  } else {
    out << dump(j);
  }
}

void cmd_synth(const SynthOptions& opt, std::ostream& out) {
  SynthSpec spec;
  std::optional<UnsafeValueSpec> unsafe;
  if (opt.spec) {
    spec = parse_synth_spec(read_text_file(*opt.spec));
    if (opt.seed) spec.seed = *opt.seed;
  } else {
    if (*opt.preset != "three-blob") throw Error(ErrorCode::kInvalidArgument, "unknown preset '" + *opt.preset + "'");
    auto [s, u] = three_blob_preset(opt.dim, opt.points, opt.noise, opt.seed.value_or(0));
    spec = std::move(s);
    unsafe = std::move(u);
  }
  const auto ds = generate(spec);

  RunManifest manifest("synth", Json::parse(dump_synth_spec(spec)));
  if (opt.spec) manifest.input("spec", *opt.spec);
  ensure_dir(opt.out);
  std::ostringstream features;
  write_feature_matrix(ds.features, features);
  emit(manifest, opt.out, "features.csv", features.str());
  save_parameter_table(ds.params, opt.out / "params.csv");
  manifest.output("params.csv");
  std::ostringstream truth;
  truth << "id,blob\n";
  for (std::size_t i = 0; i < ds.truth.size(); ++i) {
    truth << ds.features.ids()[i] << ',' << (ds.truth[i] == kNoiseLabel ? std::string("noise") : std::to_string(ds.truth[i]))
          << '\n';
  }
  emit(manifest, opt.out, "truth.csv", truth.str());
  emit(manifest, opt.out, "synth_spec.json", dump_synth_spec(spec));
  if (unsafe) emit(manifest, opt.out, "unsafe_spec.json", dump_unsafe_spec(*unsafe));
  manifest.write(opt.out);
  out << "synth: " << ds.features.rows() << " points in " << ds.features.cols() << " dimensions, "
      << spec.blobs.size() << " blobs -> " << opt.out.string() << '\n';
}

}  // namespace safe::cli
