#pragma once

#include <string>
#include <vector>

#include "safe/clustering.hpp"
#include "safe/rootcause.hpp"
#include "safe/types.hpp"

namespace safe::cli {

struct AnalysisBundle {
  RootCauseClusterSet clusters;
  UnsafeValueSpec spec;
  double rr_threshold = 0.5;
  VarianceReport variance;
  ExplanatoryVerdict verdict;
  CoverageReport coverage;
  std::vector<HistogramBin> histogram;
  long error_count = 0;
  long inspection_hundredths = 0;
  /// Per cluster, up to five member ids nearest to the cluster's core points.
  std::vector<std::vector<std::string>> representatives;
};

/// Percentage of explanatory clusters, 0 when there are no clusters.
double explanatory_percentage(const AnalysisBundle& b);

std::string render_text_report(const AnalysisBundle& b);
/// Self-contained page: inline style, no scripts, no external assets.
std::string render_html_report(const AnalysisBundle& b);

}  // namespace safe::cli
