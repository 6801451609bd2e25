#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wardwalk/outlier.hpp"

namespace wardwalk {

// Four-decimal p-value in the significance table's style: values below one
// drop the leading zero (".0002"), one renders as "1.0000".
std::string render_p_4dp(double p);

// Aligned text table with one row per report: mode, the county and
// frozen-district flags, epsilon and the rendered p-value.
std::string render_report_table(std::span<const EpsilonReport> reports);

// Fixed-width binning of trajectory labels. The range covers the labels and
// the seed label; the seed is marked but only counted if it appears among
// the labels. A zero-width range degenerates to a single bin.
struct Histogram {
  double lo = 0.0;
  double bin_width = 0.0;
  std::vector<std::int64_t> counts;
  double seed_label = 0.0;
};

Histogram build_histogram(std::span<const double> labels, double seed_label,
                          int bins = 40);

// "bin_left,count" rows, one per bin.
std::string histogram_to_csv(const Histogram& histogram);

// Self-contained SVG bar chart with a vertical marker at the seed label.
std::string histogram_to_svg(const Histogram& histogram);

}  // namespace wardwalk
