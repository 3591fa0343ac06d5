#include "report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <variant>

namespace safe::cli {
namespace {

std::string fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string hundredths(long h) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%ld.%02ld", h / 100, h % 100);
  return buf;
}

const UnsafeEntry* entry_for(const UnsafeValueSpec& spec, const std::string& param) {
  for (const auto& e : spec.entries)
    if (e.param == param) return &e;
  return nullptr;
}

// "lo <> hi" window for subrange rules, "<= v" for at-most rules
std::string condition(const UnsafeValueSpec& spec, const Witness& w) {
  const auto* e = entry_for(spec, w.param);
  if (!e) return "";
  if (const auto* sub = std::get_if<SubrangeFraction>(&e->rule)) {
    const double half = sub->fraction * containing_subrange_length(*sub, w.cluster_mean);
    return fixed(w.unsafe_value - half) + " <> " + fixed(w.unsafe_value + half);
  }
  return "<= " + fixed(w.unsafe_value);
}

class Table {
 public:
  explicit Table(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
  std::string str() const {
    std::vector<std::size_t> w(rows_.front().size(), 0);
    for (const auto& r : rows_)
      for (std::size_t c = 0; c < r.size(); ++c) w[c] = std::max(w[c], display_width(r[c]));
    std::ostringstream out;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      std::string line;
      for (std::size_t c = 0; c < rows_[i].size(); ++c) {
        line += rows_[i][c];
        if (c + 1 < rows_[i].size()) line += std::string(w[c] - display_width(rows_[i][c]) + 2, ' ');
      }
      out << line << '\n';
      if (i == 0) {
        std::size_t total = 0;
        for (auto x : w) total += x + 2;
        out << std::string(total - 2, '-') << '\n';
      }
    }
    return out.str();
  }

 private:
  // counts UTF-8 code points, enough for the check marks used here
  static std::size_t display_width(const std::string& s) {
    return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) { return (c & 0xC0) != 0x80; }));
  }
  std::vector<std::vector<std::string>> rows_;
};

std::string html_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

bool is_covered(const CoverageReport& c, const UnsafeValueRef& r) {
  return std::find(c.covered.begin(), c.covered.end(), r) != c.covered.end();
}

}  // namespace

double explanatory_percentage(const AnalysisBundle& b) {
  if (b.verdict.clusters.empty()) return 0.0;
  return 100.0 * static_cast<double>(b.verdict.explanatory_count()) / static_cast<double>(b.verdict.clusters.size());
}

std::string render_text_report(const AnalysisBundle& b) {
  std::ostringstream out;
  const auto k = b.clusters.clusters.size();
  out << "Root cause clusters: " << k << " over " << b.error_count << " error-inducing inputs (eps "
      << fixed(b.clusters.epsilon, 4) << ", MinPts " << b.clusters.min_pts << ")\n";
  out << "Inspection ratio: " << hundredths(b.inspection_hundredths) << "% (5 images per cluster)\n";
  out << "Explanatory clusters: " << b.verdict.explanatory_count() << " of " << k << " ("
      << fixed(explanatory_percentage(b)) << "%), rr threshold " << fixed(b.rr_threshold) << "\n";
  out << "Unsafe values covered: " << b.coverage.coverage_count() << " of " << b.coverage.total.size() << "\n\n";

  out << "Explanatory parameters\n";
  Table t({"cluster", "size", "parameter", "rr", "average", "unsafe", "condition"});
  for (std::size_t c = 0; c < b.verdict.clusters.size(); ++c) {
    const auto& v = b.verdict.clusters[c];
    const auto size = std::to_string(b.clusters.clusters[c].member_ids.size());
    if (v.witnesses.empty()) {
      t.add({std::to_string(v.cluster_id), size, "-", "", "", "", ""});
      continue;
    }
    for (const auto& w : v.witnesses) {
      t.add({std::to_string(v.cluster_id), size, w.param, fixed(w.rr), fixed(w.cluster_mean), fixed(w.unsafe_value),
             condition(b.spec, w)});
    }
  }
  out << t.str() << '\n';

  out << "Variance reduction\n";
  Table h({"rr above", "clusters %"});
  for (const auto& bin : b.histogram) h.add({fixed(100.0 * bin.threshold, 0) + "%", fixed(bin.percentage)});
  out << h.str() << '\n';

  out << "Unsafe value coverage\n";
  Table cov({"parameter", "unsafe value", "covered"});
  for (const auto& r : b.coverage.total) cov.add({r.param, fixed(r.value), is_covered(b.coverage, r) ? "✓" : "✗"});
  cov.add({"TOTAL", "", std::to_string(b.coverage.coverage_count()) + "/" + std::to_string(b.coverage.total.size())});
  out << cov.str();
  return out.str();
}

std::string render_html_report(const AnalysisBundle& b) {
  std::ostringstream o;
  o << "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n<title>Root cause clusters</title>\n"
    << "<style>\n"
    << "body{font-family:sans-serif;margin:2em;color:#222}\n"
    << "table{border-collapse:collapse;margin:0.5em 0 1.5em}\n"
    << "td,th{border:1px solid #bbb;padding:3px 8px;text-align:left}\n"
    << ".card{border:1px solid #999;border-radius:4px;padding:0.6em 1em;margin:0.8em 0}\n"
    << ".bar{background:#4a7fb0;height:0.9em}\n"
    << ".yes{color:#080}.no{color:#a00}\n"
    << "</style>\n</head>\n<body>\n";
  const auto k = b.clusters.clusters.size();
  o << "<h1>Root cause clusters</h1>\n<p>" << k << " clusters over " << b.error_count
    << " error-inducing inputs. Inspection ratio " << hundredths(b.inspection_hundredths)
    << "%. Explanatory clusters: " << b.verdict.explanatory_count() << " of " << k << " ("
    << fixed(explanatory_percentage(b)) << "%). Unsafe values covered: " << b.coverage.coverage_count() << " of "
    << b.coverage.total.size() << ".</p>\n";

  o << "<h2>Variance reduction</h2>\n<table>\n<tr><th>rr above</th><th>clusters</th><th></th></tr>\n";
  for (const auto& bin : b.histogram) {
    o << "<tr><td>" << fixed(100.0 * bin.threshold, 0) << "%</td><td>" << fixed(bin.percentage)
      << "%</td><td style=\"width:12em\"><div class=\"bar\" style=\"width:" << fixed(bin.percentage, 1)
      << "%\"></div></td></tr>\n";
  }
  o << "</table>\n";

  o << "<h2>Clusters</h2>\n";
  for (std::size_t c = 0; c < k; ++c) {
    const auto& cl = b.clusters.clusters[c];
    const auto& v = b.verdict.clusters[c];
    o << "<div class=\"card\">\n<h3>Cluster " << cl.id << "</h3>\n<p>" << cl.member_ids.size() << " members, "
      << cl.core_ids.size() << " core points" << (v.explanatory ? ", explanatory" : "") << "</p>\n";
    o << "<p>Inspect:</p>\n<ol>\n";
    for (const auto& id : b.representatives[c]) o << "<li><code>" << html_escape(id) << "</code></li>\n";
    o << "</ol>\n";
    if (!v.witnesses.empty()) {
      o << "<table>\n<tr><th>parameter</th><th>rr</th><th>average</th><th>unsafe</th><th>condition</th></tr>\n";
      for (const auto& w : v.witnesses) {
        o << "<tr><td>" << html_escape(w.param) << "</td><td>" << fixed(w.rr) << "</td><td>" << fixed(w.cluster_mean)
          << "</td><td>" << fixed(w.unsafe_value) << "</td><td>" << html_escape(condition(b.spec, w))
          << "</td></tr>\n";
      }
      o << "</table>\n";
    }
    o << "</div>\n";
  }

  o << "<h2>Unsafe value coverage</h2>\n<table>\n<tr><th>parameter</th><th>unsafe value</th><th>covered</th></tr>\n";
  for (const auto& r : b.coverage.total) {
    const bool hit = is_covered(b.coverage, r);
    o << "<tr><td>" << html_escape(r.param) << "</td><td>" << fixed(r.value) << "</td><td class=\""
      << (hit ? "yes\">&#10003;" : "no\">&#10007;") << "</td></tr>\n";
  }
  o << "</table>\n</body>\n</html>\n";
  return o.str();
}

}  // namespace safe::cli
