// One PASS/FAIL line per acceptance criterion, each with its wall time.
//
// Exit status is the number of failing criteria that are not listed as known
// unattainable; those still print FAIL with the measured evidence.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli_runner.hpp"
#include "helpers.hpp"
#include "oracles.hpp"
#include "safe/clustering.hpp"
#include "safe/dataio.hpp"
#include "safe/evalstats.hpp"
#include "safe/json.hpp"
#include "safe/reduction.hpp"
#include "safe/rootcause.hpp"
#include "safe/selection.hpp"
#include "safe/synthgen.hpp"

using namespace safe;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  double budget_s;
  std::function<Outcome()> check;
  // non-empty: documented as unattainable, a FAIL does not fail the binary
  std::string known_unattainable;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome inspection_ratios() {
  struct Row {
    const char* subject;
    long k, n;
    double printed, tol;
  };
  // cluster count, error count, reference ratio
  const Row rows[] = {{"GD", 23, 5371, 2.14, 0.01}, {"OC", 26, 506, 25.69, 0.01}, {"HPD", 20, 1580, 6.32, 0.01},
                      {"FLD", 64, 1554, 20.5, 0.1}, {"OD", 2, 838, 1.19, 0.01},   {"TS", 9, 2317, 1.94, 0.01}};
  Outcome o{true, ""};
  for (const auto& r : rows) {
    const double got = inspection_ratio(r.k, r.n);
    const bool ok = std::abs(got - r.printed) <= r.tol + 1e-12;
    o.pass = o.pass && ok;
    o.detail += std::string(r.subject) + "=" + fmt("%.2f", got) + (ok ? " " : "(!) ");
  }
  return o;
}

Outcome unsafe_size() {
  const auto n = unsafe_set_size(4232, 0.3, 0.8803);
  return {n == 152, "N=" + std::to_string(n)};
}

Outcome dbscan_oracle() {
  std::mt19937_64 gen(1001);
  int agree = 0, cases = 0;
  std::string first_bad;
  for (int rep = 0; rep < 500; ++rep) {
    const auto n = std::uniform_int_distribution<std::size_t>(5, 200)(gen);
    const auto d = std::uniform_int_distribution<std::size_t>(1, 8)(gen);
    auto pts = testing::random_points(gen, n, d);
    // eps at a random quantile of the pairwise distances keeps cases non-trivial
    std::vector<double> pair;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) pair.push_back(oracle::dist(pts[i], pts[j]));
    std::sort(pair.begin(), pair.end());
    const double q = std::uniform_real_distribution<double>(0.005, 0.3)(gen);
    double eps = pair[static_cast<std::size_t>(q * double(pair.size() - 1))];
    if (!(eps > 0)) eps = 1e-3;
    const int mp = std::uniform_int_distribution<int>(2, static_cast<int>(std::min<std::size_t>(n, 20)))(gen);

    const auto r = dbscan(testing::matrix_from(pts), eps, mp);
    const auto ref = oracle::dbscan_reference(pts, eps, mp, [&](std::size_t i, std::size_t j) {
      return oracle::dist(pts[i], pts[j]);
    });
    bool ok = true;
    std::map<int, std::set<std::size_t>> by;
    std::map<int, std::size_t> rep_of;
    for (std::size_t i = 0; i < n; ++i) {
      const bool core = r.role[i] == PointRole::kCore;
      ok = ok && core == ref.core[i];
      if (core) by[r.assignment[i]].insert(i);
    }
    std::set<std::set<std::size_t>> part;
    for (auto& [c, s] : by) {
      part.insert(s);
      rep_of[c] = *s.begin();
    }
    ok = ok && part == ref.core_partition;
    for (std::size_t i = 0; ok && i < n; ++i) {
      if (ref.core[i]) continue;
      const auto& cand = ref.border_candidates[i];
      if (cand.empty()) {
        ok = r.assignment[i] == kNoise && r.role[i] == PointRole::kNoise;
      } else {
        ok = r.role[i] == PointRole::kBorder && cand.count(rep_of[r.assignment[i]]) == 1;
      }
    }
    ++cases;
    agree += ok ? 1 : 0;
    if (!ok && first_bad.empty()) first_bad = " first mismatch at case " + std::to_string(rep);
  }
  return {agree == cases, std::to_string(agree) + "/" + std::to_string(cases) + " cases identical" + first_bad};
}

Outcome silhouette_oracle() {
  std::mt19937_64 gen(1002);
  double worst = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const auto n = std::uniform_int_distribution<std::size_t>(4, 100)(gen);
    const auto d = std::uniform_int_distribution<std::size_t>(1, 6)(gen);
    const int k = std::uniform_int_distribution<int>(2, 6)(gen);
    auto pts = testing::random_points(gen, n, d);
    std::vector<int> lab(n);
    std::uniform_int_distribution<int> ld(-1, k - 1);
    for (auto& l : lab) l = ld(gen);
    lab[0] = 0;
    lab[1] = 1;
    const double got = silhouette(testing::matrix_from(pts), lab);
    worst = std::max(worst, std::abs(got - oracle::silhouette_reference(pts, lab)));
  }
  return {worst <= 1e-9, "max |diff| " + fmt("%.3g", worst) + " over 200 datasets"};
}

Outcome pca_oracle() {
  std::mt19937_64 gen(1003);
  double ev = 0, proj = 0, ortho = 0, recon = 0;
  for (int rep = 0; rep < 100; ++rep) {
    auto pts = testing::random_points(gen, 20, 10, -1.0, 1.0);
    const auto x = testing::matrix_from(pts);
    const auto model = fit_pca(x, 10);
    const auto ref = oracle::eigen_pca(pts);
    const auto y = pca_transform(model, x);
    for (Eigen::Index k = 0; k < 10; ++k) {
      ev = std::max(ev, std::abs(model.explained_variance[std::size_t(k)] - ref.values(k)));
      for (std::size_t i = 0; i < 20; ++i) {
        double p = 0;
        for (Eigen::Index j = 0; j < 10; ++j) p += (pts[i][std::size_t(j)] - ref.mean(j)) * ref.vectors(j, k);
        proj = std::max(proj, std::abs(y(i, std::size_t(k)) - p));
      }
      for (std::size_t l = 0; l < 10; ++l) {
        double dot = 0;
        for (std::size_t j = 0; j < 10; ++j) dot += model.component(std::size_t(k))[j] * model.component(l)[j];
        ortho = std::max(ortho, std::abs(dot - (std::size_t(k) == l ? 1.0 : 0.0)));
      }
    }
    const auto back = pca_inverse_transform(model, y);
    for (std::size_t i = 0; i < x.values().size(); ++i) recon = std::max(recon, std::abs(back.values()[i] - x.values()[i]));
  }
  const bool ok = ev <= 1e-8 && proj <= 1e-8 && ortho <= 1e-8 && recon <= 1e-6;
  return {ok, "eigenvalues " + fmt("%.2g", ev) + ", projections " + fmt("%.2g", proj) + ", orthonormality " +
                  fmt("%.2g", ortho) + ", reconstruction " + fmt("%.2g", recon)};
}

Outcome planted_truth() {
  Outcome o{true, ""};
  for (std::uint64_t seed : {1, 2, 3}) {
    auto [spec, unsafe] = three_blob_preset(512, 300, 0.05, seed);
    const auto ds = generate(spec);
    const RunConfig cfg;
    const auto model = fit_pca(ds.features, cfg.target_dim);
    const auto out = auto_cluster(pca_transform(model, ds.features), cfg);
    const double agreement = oracle::best_matching_agreement(ds.truth, out.result.assignment);

    const auto report = variance_reduction(out.clusters, ds.params, ds.features.ids());
    // each blob's cluster: the predicted label holding most of its points
    double min_rr = 1.0;
    for (int b = 0; b < 3; ++b) {
      std::map<int, int> votes;
      for (std::size_t i = 0; i < ds.truth.size(); ++i)
        if (ds.truth[i] == b && out.result.assignment[i] != kNoise) ++votes[out.result.assignment[i]];
      if (votes.empty()) {
        min_rr = -1.0;
        continue;
      }
      const int c = std::max_element(votes.begin(), votes.end(), [](auto& a, auto& z) { return a.second < z.second; })->first;
      for (const auto& p : report.clusters[std::size_t(c)].params) min_rr = std::min(min_rr, p.rr);
    }
    const auto verdict = explanatory_clusters(report, unsafe, cfg.rr_threshold);
    const auto coverage = unsafe_value_coverage(verdict, unsafe);
    const auto hist = reduction_histogram(report);
    const double at90 = hist.back().percentage;

    const bool ok = out.result.cluster_count() == 3 && agreement >= 0.95 && min_rr > 0.9 &&
                    coverage.coverage_count() == coverage.total.size() && at90 == 100.0;
    o.pass = o.pass && ok;
    o.detail += "seed " + std::to_string(seed) + ": K=" + std::to_string(out.result.cluster_count()) +
                " agree=" + fmt("%.3f", agreement) + " min rr=" + fmt("%.3f", min_rr) +
                " coverage=" + std::to_string(coverage.coverage_count()) + "/" + std::to_string(coverage.total.size()) +
                " rr>90%:" + fmt("%.0f%%", at90) + "; ";
  }
  return o;
}

Outcome selection_properties() {
  std::mt19937_64 gen(1004);
  int sum_ok = 0, dom_ok = 0, perm_ok = 0;
  const int cases = 100;
  for (int rep = 0; rep < cases; ++rep) {
    const std::size_t d = 1 + gen() % 4;
    const std::size_t k = 1 + gen() % 5;
    RootCauseClusterSet set;
    std::vector<std::vector<double>> space_pts;
    for (std::size_t c = 0; c < k; ++c) {
      RootCauseCluster cl;
      cl.id = static_cast<int>(c);
      const std::size_t members = 2 + gen() % 5;
      for (std::size_t m = 0; m < members; ++m) {
        const std::string id = "s" + std::to_string(space_pts.size());
        space_pts.push_back(testing::random_points(gen, 1, d, -5, 5)[0]);
        cl.member_ids.push_back(id);
        if (m == 0 || gen() % 2) cl.core_ids.push_back(id);
      }
      set.clusters.push_back(cl);
    }
    std::vector<std::string> space_ids;
    for (std::size_t i = 0; i < space_pts.size(); ++i) space_ids.push_back("s" + std::to_string(i));
    std::vector<double> flat;
    for (auto& p : space_pts) flat.insert(flat.end(), p.begin(), p.end());
    const FeatureMatrix space(space_ids, flat, d);

    const std::size_t m = 5 + gen() % 80;
    auto imp_pts = testing::random_points(gen, m, d, -6, 6);
    const auto imp_ids = testing::make_ids(m, "i");
    auto build = [&](const std::vector<std::size_t>& order) {
      std::vector<std::string> ids;
      std::vector<double> v;
      for (auto i : order) {
        ids.push_back(imp_ids[i]);
        v.insert(v.end(), imp_pts[i].begin(), imp_pts[i].end());
      }
      return FeatureMatrix(ids, v, d);
    };
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    const std::size_t test_size = 50 + gen() % 2000;
    const double acc = std::uniform_real_distribution<double>(0.5, 1.0)(gen);
    const std::size_t budget = unsafe_set_size(test_size, 0.3, acc);

    auto plan_for = [&](const FeatureMatrix& imp, CoreAssignment* keep) {
      const auto a = assign_to_clusters(imp, set, space);
      if (keep) *keep = a;
      return select_unsafe_set(a, cluster_quotas(budget, a.counts(k)), budget);
    };
    CoreAssignment assignment;
    const auto plan = plan_for(build(order), &assignment);

    sum_ok += plan.selected_count() == std::min(budget, m) ? 1 : 0;

    std::map<std::string, double> dist;
    for (const auto& mt : assignment.matches) dist[mt.id] = mt.distance;
    bool dominated = true;
    for (const auto& cs : plan.clusters) {
      std::set<std::string> chosen(cs.selected.begin(), cs.selected.end());
      for (const auto& s : cs.selected) {
        for (const auto& mt : assignment.matches) {
          if (mt.cluster_id != cs.cluster_id || chosen.count(mt.id)) continue;
          if (std::make_pair(dist[s], s) > std::make_pair(mt.distance, mt.id)) dominated = false;
        }
      }
    }
    dom_ok += dominated ? 1 : 0;

    std::shuffle(order.begin(), order.end(), gen);
    const auto shuffled = plan_for(build(order), nullptr);
    perm_ok += dump(to_json(shuffled)) == dump(to_json(plan)) ? 1 : 0;
  }
  const bool ok = sum_ok == cases && dom_ok == cases && perm_ok == cases;
  return {ok, "sum=min(N,C) " + std::to_string(sum_ok) + "/100, distance dominance " + std::to_string(dom_ok) +
                  "/100, permutation invariance " + std::to_string(perm_ok) + "/100"};
}

// Every split of a pooled sample into xs (size n1) and ys, over all pooled
// value patterns drawn from `alphabet` values (alphabet 0 means all distinct).
struct MwScan {
  double worst = 0;
  std::string where;
  long configs = 0;
  long over = 0;
};

void scan_mw(MwScan& s, const std::vector<double>& xs, const std::vector<double>& ys) {
  const double diff = std::abs(mann_whitney_u(xs, ys).p_value - oracle::exact_permutation_p(xs, ys));
  ++s.configs;
  if (diff > 0.05) ++s.over;
  if (diff > s.worst) {
    s.worst = diff;
    std::ostringstream w;
    w << "n1=" << xs.size() << " n2=" << ys.size() << " xs=[";
    for (double v : xs) w << v << ' ';
    w << "] ys=[";
    for (double v : ys) w << v << ' ';
    w << ']';
    s.where = w.str();
  }
}

Outcome statistics() {
  using V = std::vector<double>;
  bool a12 = vargha_delaney_a12(V{3, 1, 2}, V{3, 1, 2}) == 0.5 && vargha_delaney_a12(V{5, 6}, V{1, 2, 3}) == 1.0 &&
             vargha_delaney_a12(V{1, 2}, V{1, 3}) == 0.375;

  MwScan scan;
  for (std::size_t n = 2; n <= 8; ++n) {
    for (std::size_t n1 = 1; n1 < n; ++n1) {
      // distinct values: every rank pattern
      std::vector<bool> pick(n, false);
      std::fill(pick.begin(), pick.begin() + std::ptrdiff_t(n1), true);
      do {
        V xs, ys;
        for (std::size_t i = 0; i < n; ++i) (pick[i] ? xs : ys).push_back(double(i + 1));
        scan_mw(scan, xs, ys);
      } while (std::prev_permutation(pick.begin(), pick.end()));
      // tied values from a three-letter alphabet
      std::vector<int> digits(n, 0);
      while (true) {
        V xs, ys;
        for (std::size_t i = 0; i < n; ++i) (i < n1 ? xs : ys).push_back(double(digits[i]));
        scan_mw(scan, xs, ys);
        std::size_t p = 0;
        while (p < n && ++digits[p] == 3) digits[p++] = 0;
        if (p == n) break;
      }
    }
  }
  const bool mw = scan.worst <= 0.05;
  return {a12 && mw, std::string("A12 identities ") + (a12 ? "ok" : "WRONG") + "; Mann-Whitney max |p_normal - p_exact| " +
                         fmt("%.4f", scan.worst) + " at " + scan.where + ", " + std::to_string(scan.over) + " of " +
                         std::to_string(scan.configs) + " configurations exceed 0.05"};
}

bool same_tree(const fs::path& a, const fs::path& b, std::string& why) {
  std::set<std::string> names;
  for (const auto& e : fs::directory_iterator(a)) names.insert(e.path().filename().string());
  for (const auto& e : fs::directory_iterator(b)) names.insert(e.path().filename().string());
  for (const auto& n : names) {
    if (!fs::exists(a / n) || !fs::exists(b / n) || read_text_file(a / n) != read_text_file(b / n)) {
      why = n;
      return false;
    }
  }
  return true;
}

Outcome determinism() {
  const auto dir = testing::temp_dir("acceptance_determinism");
  auto synth = testing::run_cli({"synth", "--preset", "three-blob", "--dim", "64", "--points", "200", "--seed", "11",
                                 "--out", (dir / "data").string()});
  auto improve = testing::run_cli({"synth", "--preset", "three-blob", "--dim", "64", "--points", "120", "--seed", "12",
                                   "--out", (dir / "improve").string()});
  if (synth.code != 0 || improve.code != 0) return {false, "synth failed: " + synth.err + improve.err};
  std::string why;
  bool ok = true;
  std::string detail;
  for (const char* run : {"c1", "c2"}) {
    auto r = testing::run_cli({"cluster", "--features", (dir / "data/features.csv").string(), "--target-dim", "32",
                               "--seed", "7", "--out", (dir / run).string()});
    if (r.code != 0) return {false, "cluster exit " + std::to_string(r.code) + ": " + r.err};
  }
  const bool cluster_same = same_tree(dir / "c1", dir / "c2", why);
  detail += std::string("cluster ") + (cluster_same ? "identical" : "differs in " + why);
  ok = ok && cluster_same;
  for (const char* strategy : {"core", "random"}) {
    for (const char* run : {"s1", "s2"}) {
      auto r = testing::run_cli({"select", "--clusters", (dir / "c1").string(), "--improvement",
                                 (dir / "improve/features.csv").string(), "--test-size", "2000", "--test-acc", "0.95",
                                 "--balance-target", "60", "--strategy", strategy, "--seed", "7", "--out",
                                 (dir / (std::string(run) + strategy)).string()});
      if (r.code != 0) return {false, "select exit " + std::to_string(r.code) + ": " + r.err};
    }
    const bool same = same_tree(dir / (std::string("s1") + strategy), dir / (std::string("s2") + strategy), why);
    detail += std::string(", select/") + strategy + (same ? " identical" : " differs in " + why);
    ok = ok && same;
  }
  return {ok, detail};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"inspection-ratio reproduction", 1.0, inspection_ratios, ""},
      {"unsafe set size (4232, 0.3, 0.8803) -> 152", 1.0, unsafe_size, ""},
      {"DBSCAN oracle equivalence (500 datasets)", 60.0, dbscan_oracle, ""},
      {"silhouette oracle (200 datasets, 1e-9)", 30.0, silhouette_oracle, ""},
      {"PCA oracle (100 random 20x10)", 30.0, pca_oracle, ""},
      {"end-to-end planted truth (dim 512, 300 points, 5% noise)", 120.0, planted_truth, ""},
      {"selection properties (100 instances)", 30.0, selection_properties, ""},
      {"statistics: A12 identities, Mann-Whitney vs exact p (n <= 8)", 30.0, statistics,
       "normal approximation cannot track the exact p when one sample has a single element"},
      {"determinism of cluster and select", 60.0, determinism, ""},
  };
  int unexpected = 0;
  int passed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_s) {
      o.pass = false;
      o.detail += " [over time budget " + fmt("%.0f s", c.budget_s) + "]";
    }
    std::printf("%s  %-62s %8.3f s  %s\n", o.pass ? "PASS" : "FAIL", c.name.c_str(), secs, o.detail.c_str());
    if (o.pass) {
      ++passed;
    } else if (!c.known_unattainable.empty()) {
      std::printf("      known unattainable: %s\n", c.known_unattainable.c_str());
    } else {
      ++unexpected;
    }
  }
  std::printf("%d of %zu criteria passed, %d unexpected failure(s)\n", passed, criteria.size(), unexpected);
  std::fflush(stdout);
  return unexpected;
}
