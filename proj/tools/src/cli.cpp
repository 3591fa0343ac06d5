#include "cli.hpp"

#include <CLI11.hpp>
#include <iostream>
#include <set>

#include "commands.hpp"
#include "safe/error.hpp"

namespace safe::cli {
namespace {

SweepRange parse_sweep(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw Error(ErrorCode::kInvalidArgument, "--sweep must look like LO..HI");
  try {
    std::size_t a = 0, b = 0;
    const std::string lo = text.substr(0, dots), hi = text.substr(dots + 2);
    SweepRange r{std::stoi(lo, &a), std::stoi(hi, &b)};
    if (a != lo.size() || b != hi.size()) throw std::invalid_argument("trailing characters");
    return r;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kInvalidArgument, "--sweep must look like LO..HI, got '" + text + "'");
  }
}

int exit_for(const std::string& command, ErrorCode code) {
  static const std::set<ErrorCode> clustering = {ErrorCode::kNoValidClustering, ErrorCode::kTooFewPoints,
                                                 ErrorCode::kDegenerateInput, ErrorCode::kTooShort};
  static const std::set<ErrorCode> analysis = {ErrorCode::kIdMismatch, ErrorCode::kUnknownParameter};
  static const std::set<ErrorCode> selection = {ErrorCode::kDimensionMismatch, ErrorCode::kIdMismatch,
                                                ErrorCode::kEmptyClusterSet, ErrorCode::kEmptyImprovementSet};
  if (command == "cluster" && clustering.count(code)) return kExitClustering;
  if (command == "analyze" && analysis.count(code)) return kExitAnalysis;
  if (command == "select" && selection.count(code)) return kExitSelection;
  return kExitUsage;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Root cause clustering of error-inducing DNN inputs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "safe 0.1.0");

  ExtractOptions ex;
  std::string ex_images, ex_features;
  auto* extract = app.add_subcommand("extract", "Validate a feature file or extract surrogate features from PGM images");
  auto* ex_img_opt = extract->add_option("--images", ex_images, "Directory of .pgm images");
  auto* ex_feat_opt = extract->add_option("--features", ex_features, "Existing feature CSV");
  ex_img_opt->excludes(ex_feat_opt);
  extract->add_option("--out", ex.out, "Output feature CSV")->required();

  ClusterOptions cl;
  std::string sweep = "3..20";
  auto* cluster = app.add_subcommand("cluster", "PCA reduction and DBSCAN root cause clustering");
  cluster->add_option("--features", cl.features, "Feature CSV")->required();
  cluster->add_option("--target-dim", cl.config.target_dim, "PCA components to keep")->capture_default_str();
  cluster->add_option("--k", cl.config.k_neighbors, "Neighbours in the k-distance profile")->capture_default_str();
  cluster->add_option("--sweep", sweep, "MinPts range LO..HI")->capture_default_str();
  cluster->add_option("--seed", cl.config.seed, "Seed echoed into the run manifest")->capture_default_str();
  cluster->add_option("--out", cl.out, "Output directory")->required();

  AnalyzeOptions an;
  std::string an_spec;
  auto* analyze = app.add_subcommand("analyze", "Variance reduction, explanatory clusters and unsafe value coverage");
  analyze->add_option("--clusters", an.clusters, "Output directory of `cluster`")->required();
  analyze->add_option("--params", an.params, "Simulator parameter CSV")->required();
  auto* an_spec_opt = analyze->add_option("--spec", an_spec, "Unsafe value spec JSON");
  analyze->add_option("--rr-threshold", an.rr_threshold, "Variance reduction threshold")->capture_default_str();
  analyze->add_option("--out", an.out, "Output directory")->required();

  SelectOptions se;
  std::string se_train;
  std::size_t se_target = 0;
  auto* select = app.add_subcommand("select", "Choose the unsafe set from an improvement set");
  select->add_option("--clusters", se.clusters, "Output directory of `cluster`")->required();
  select->add_option("--improvement", se.improvement, "Improvement-set feature CSV (raw features)")->required();
  select->add_option("--test-size", se.test_size, "Test set size")->required();
  select->add_option("--test-acc", se.test_acc, "Test set accuracy in [0, 1]")->required();
  select->add_option("--sf", se.sf, "Selection factor")->capture_default_str();
  auto* se_train_opt = select->add_option("--train-ids", se_train, "Original training ids, one per line");
  auto* se_target_opt = select->add_option("--balance-target", se_target, "Unsafe set size after bootstrap");
  select->add_option("--seed", se.seed, "Seed for all random draws")->capture_default_str();
  select->add_option("--strategy", se.strategy, "core or random")
      ->check(CLI::IsMember({"core", "random"}))
      ->capture_default_str();
  select->add_option("--out", se.out, "Output directory")->required();

  CompareOptions co;
  std::vector<std::string> co_runs;
  std::string co_out;
  auto* compare = app.add_subcommand("compare", "Pairwise A12 and Mann-Whitney U over accuracy lists");
  compare->add_option("--runs", co_runs, "Accuracy files, one value per line");
  auto* co_out_opt = compare->add_option("--out", co_out, "Output JSON (default stdout)");

  SynthOptions sy;
  std::string sy_spec, sy_preset;
  std::uint64_t sy_seed = 0;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset with planted clusters");
  auto* sy_spec_opt = synth->add_option("--spec", sy_spec, "Synth spec JSON");
  auto* sy_preset_opt = synth->add_option("--preset", sy_preset, "Built-in preset")->check(CLI::IsMember({"three-blob"}));
  sy_spec_opt->excludes(sy_preset_opt);
  synth->add_option("--dim", sy.dim, "Preset feature dimension")->capture_default_str();
  synth->add_option("--points", sy.points, "Preset point count")->capture_default_str();
  synth->add_option("--noise", sy.noise, "Preset noise fraction")->capture_default_str();
  auto* sy_seed_opt = synth->add_option("--seed", sy_seed, "Seed (overrides the spec's)");
  synth->add_option("--out", sy.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (extract->parsed()) {
      if (ex_img_opt->count() + ex_feat_opt->count() != 1) {
        err << "extract: give exactly one of --images or --features\n";
        return kExitUsage;
      }
      if (ex_img_opt->count()) ex.images = ex_images;
      if (ex_feat_opt->count()) ex.features = ex_features;
      cmd_extract(ex, out);
    } else if (cluster->parsed()) {
      cl.config.minpts_sweep = parse_sweep(sweep);
      cmd_cluster(cl, out);
    } else if (analyze->parsed()) {
      if (an_spec_opt->count()) an.spec = an_spec;
      cmd_analyze(an, out);
    } else if (select->parsed()) {
      if (se_train_opt->count()) se.train_ids = se_train;
      if (se_target_opt->count()) se.balance_target = se_target;
      cmd_select(se, out);
    } else if (compare->parsed()) {
      for (const auto& r : co_runs) co.runs.emplace_back(r);
      if (co_out_opt->count()) co.out = co_out;
      cmd_compare(co, out);
    } else if (synth->parsed()) {
      if (sy_spec_opt->count() + sy_preset_opt->count() != 1) {
        err << "synth: give exactly one of --spec or --preset\n";
        return kExitUsage;
      }
      if (sy_spec_opt->count()) sy.spec = sy_spec;
      if (sy_preset_opt->count()) sy.preset = sy_preset;
      if (sy_seed_opt->count()) sy.seed = sy_seed;
      cmd_synth(sy, out);
    }
  } catch (const Error& e) {
    err << name << ": " << e.what() << '\n';
    return exit_for(name, e.code());
  }
  return kExitOk;
}

int run(int argc, const char* const* argv) { return run(argc, argv, std::cout, std::cerr); }

}  // namespace safe::cli
